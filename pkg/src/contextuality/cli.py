"""Command-line front end.

Exit codes: 0 ok, 2 parse/validation error, 3 size limit, 4 precondition
(``--direct`` on an inconsistently connected system), 5 no deterministic
realization.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .bayes_deterministic import enumerate_realizations, epistemic_mixture
from .consistify import check_consistified_properties, consistify
from .couplings import coupling_report, multimaximal_coupling
from .lp import (
    DEFAULT_MAX_COLUMNS,
    FractionResult,
    PreconditionError,
    SizeLimitError,
    generalized_fraction,
    noncontextual_fraction,
)
from .serialization import (
    consistified_to_dict,
    dump_system,
    dumps,
    format_rational,
    locate,
    loads,
    parse_constraints,
    parse_system,
)
from .system_model import (
    ValidationError,
    connection,
    format_outcome,
    is_deterministic,
    is_simply_consistently_connected,
    is_strongly_consistently_connected,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_PRECONDITION = 4
EXIT_EMPTY_FAMILY = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", EXIT_VALIDATION)
    try:
        return text, loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", EXIT_VALIDATION)
    except ValidationError as exc:
        raise CliError(f"{path}:1: {exc}", EXIT_VALIDATION)


def _parse(path: str, parser):
    text, doc = _read(path)
    try:
        return parser(doc)
    except ValidationError as exc:
        line = locate(text, exc.where) or 1
        raise CliError(f"{path}:{line}: {exc}", EXIT_VALIDATION)
    except (TypeError, ValueError) as exc:
        raise CliError(f"{path}:1: {exc}", EXIT_VALIDATION)


def _write(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def connectedness_report(system) -> dict:
    simple = is_simply_consistently_connected(system)
    strong = is_strongly_consistently_connected(system)
    return {
        "simple": simple.ok,
        "strong": strong.ok,
        "violations": {
            "simple": [{"content": q, "contexts": list(cc)} for q, cc in simple.violations],
            "strong": [{"contents": list(qs), "contexts": list(cc)}
                       for qs, cc in strong.violations],
        },
    }


def fraction_report(res: FractionResult) -> dict:
    return {
        "alpha_max": format_rational(res.alpha_max),
        "contextual_fraction": format_rational(res.contextual_fraction),
        "noncontextual": res.noncontextual,
        "strongly_contextual": res.strongly_contextual,
    }


def witness_report(res: FractionResult) -> dict:
    w = res.witness
    return {
        "contents": list(w.contents),
        "masses": {format_outcome(o): format_rational(p) for o, p in w.masses.items()},
    }


def _print_connectedness(rep: dict, deterministic: bool) -> None:
    print(f"simply consistently connected: {str(rep['simple']).lower()}")
    for v in rep["violations"]["simple"]:
        print(f"  {v['content']}: {v['contexts'][0]} vs {v['contexts'][1]}")
    print(f"strongly consistently connected: {str(rep['strong']).lower()}")
    for v in rep["violations"]["strong"]:
        print(f"  {{{', '.join(v['contents'])}}}: {v['contexts'][0]} vs {v['contexts'][1]}")
    print(f"deterministic: {str(deterministic).lower()}")


def cmd_check(args) -> int:
    system = _parse(args.file, parse_system)
    report = {"connectedness": connectedness_report(system),
              "deterministic": is_deterministic(system)}
    if args.json:
        _write(dumps(report), None)
    else:
        _print_connectedness(report["connectedness"], report["deterministic"])
    return EXIT_OK


def cmd_fraction(args) -> int:
    system = _parse(args.file, parse_system)
    start = time.perf_counter()
    try:
        if args.direct:
            res = noncontextual_fraction(system, args.max_columns)
        else:
            res = generalized_fraction(system, args.max_columns)
    except SizeLimitError as exc:
        raise CliError(str(exc), EXIT_RESOURCE)
    except PreconditionError:
        raise CliError("--direct needs a simply consistently connected system; "
                       "run without --direct to analyse its consistification",
                       EXIT_PRECONDITION)
    elapsed = (time.perf_counter() - start) * 1000
    report = {
        "connectedness": connectedness_report(system),
        "deterministic": is_deterministic(system),
        "method": "direct" if args.direct else "consistify",
        "fraction": fraction_report(res),
        "witness": witness_report(res),
    }
    if args.timing:
        report["timing_ms"] = round(elapsed, 3)
    if args.json:
        _write(dumps(report), None)
        return EXIT_OK
    frac = report["fraction"]
    print(f"alpha_max: {frac['alpha_max']}")
    print(f"contextual_fraction: {frac['contextual_fraction']}")
    print(f"noncontextual: {str(frac['noncontextual']).lower()}")
    print(f"strongly_contextual: {str(frac['strongly_contextual']).lower()}")
    if args.timing:
        print(f"timing_ms: {report['timing_ms']}")
    return EXIT_OK


def cmd_consistify(args) -> int:
    system = _parse(args.file, parse_system)
    cs = consistify(system)
    check_consistified_properties(cs)
    _write(dumps(consistified_to_dict(cs)), args.output)
    if args.output and args.output != "-":
        print(f"{len(cs.base.contents)} contents, {len(cs.base.contexts)} contexts "
              f"-> {args.output}", file=sys.stderr)
    return EXIT_OK


def cmd_couple(args) -> int:
    system = _parse(args.file, parse_system)
    try:
        conn = connection(system, args.content)
    except KeyError as exc:
        raise CliError(exc.args[0], EXIT_VALIDATION)
    joint = multimaximal_coupling(conn)
    rep = coupling_report(joint)
    ctxs = conn.contexts
    doc = {
        "content": conn.content,
        "variables": list(ctxs),
        "marginals": {c: format_rational(p) for c, p in conn.members},
        "pmf": {format_outcome(o): format_rational(p) for o, p in joint.pmf.items()},
        "pairwise_equalities": [
            {"contexts": [ctxs[a], ctxs[b]], "probability": format_rational(p)}
            for (a, b), p in rep.pairwise_equalities.items()
        ],
        "chain_equality": format_rational(rep.chain_equality),
    }
    if args.json:
        _write(dumps(doc), None)
        return EXIT_OK
    print(f"multimaximal coupling of {conn.content} over ({', '.join(ctxs)})")
    for key, p in doc["pmf"].items():
        print(f"  {key}: {p}")
    print("pairwise Pr[equal]:")
    for entry in doc["pairwise_equalities"]:
        a, b = entry["contexts"]
        print(f"  {a} = {b}: {entry['probability']}")
    print(f"Pr[all equal]: {doc['chain_equality']}")
    return EXIT_OK


def cmd_bayes(args) -> int:
    rc, prior = _parse(args.file, parse_constraints)
    family = enumerate_realizations(rc)
    print(f"realizations: {len(family)}", file=sys.stderr)
    if family.is_empty:
        raise CliError("no deterministic realization: empty allowed set in "
                       f"{', '.join(family.empty_contexts)}", EXIT_EMPTY_FAMILY)
    if prior is not None:
        try:
            family = family.with_prior(prior)
        except ValidationError as exc:
            raise CliError(f"{args.file}: {exc}", EXIT_VALIDATION)
    _write(dump_system(epistemic_mixture(family)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextuality",
        description="Contextuality analysis of systems of dichotomous random variables.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="consistent connectedness and determinism")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fraction", help="noncontextual fraction alpha_max")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--direct", action="store_true",
                      help="LP on the system itself (consistently connected input only)")
    mode.add_argument("--consistify", action="store_true",
                      help="LP on the consistified system (default)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="report solve time in ms")
    p.add_argument("--max-columns", type=int, default=DEFAULT_MAX_COLUMNS)
    p.set_defaults(func=cmd_fraction)

    p = sub.add_parser("witness", help="alias of 'fraction --json'")
    p.add_argument("file")
    p.add_argument("--direct", action="store_true")
    p.add_argument("--max-columns", type=int, default=DEFAULT_MAX_COLUMNS)
    p.set_defaults(func=cmd_fraction, json=True, timing=False, consistify=False)

    p = sub.add_parser("consistify", help="write the consistified system")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_consistify)

    p = sub.add_parser("couple", help="multimaximal coupling of one connection")
    p.add_argument("file")
    p.add_argument("--content", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_couple)

    p = sub.add_parser("bayes", help="epistemic mixture of a constraint file")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bayes)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    raise SystemExit(main())
