"""JSON system files.

A system file looks like::

    {
      "contents": ["q1", "q2"],
      "contexts": [
        {"id": "c1", "contents": ["q1", "q2"], "pmf": {"++": "1/2", "--": "1/2"}}
      ]
    }

Outcome keys use ``+`` for +1 and ``-`` for -1, one character per content
in the context's order.  Probabilities are strings (``"a/b"`` or integers).
Constraint files replace ``pmf`` with ``allowed`` (a list of outcome keys)
and may carry ``"prior": "uniform"`` or a list of rationals.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Mapping, Optional

from .bayes_deterministic import ContextConstraint, RealizationConstraints
from .consistify import ConsistifiedSystem
from .system_model import (
    System,
    ValidationError,
    format_outcome,
    to_fraction,
    validate_system,
)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def system_to_dict(system: System) -> dict:
    return {
        "contents": list(system.contents),
        "contexts": [
            {
                "id": b.context,
                "contents": list(b.contents),
                "pmf": {format_outcome(o): format_rational(p) for o, p in b.pmf.items()},
            }
            for b in system.bunches
        ],
    }


def consistified_to_dict(cs: ConsistifiedSystem) -> dict:
    doc = system_to_dict(cs.base)
    doc["origin"] = {
        "contents": {q: list(cs.origin_map[q]) for q in cs.base.contents},
        "contexts": {c: {"kind": cs.context_kind[c], "source": cs.context_origin[c]}
                     for c in cs.base.contexts},
    }
    return doc


def dumps(doc: Mapping) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def dump_system(system: System) -> str:
    """Canonical text: outcome keys sorted (- before +), lowest terms."""
    return dumps(system_to_dict(system))


def loads(text: str) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValidationError("top level of a system file must be an object")
    return doc


def is_constraint_file(doc: Mapping) -> bool:
    return any(isinstance(c, Mapping) and "allowed" in c for c in doc.get("contexts", ()))


def parse_system(doc: Mapping) -> System:
    if is_constraint_file(doc):
        raise ValidationError("this is a constraint file (contexts carry 'allowed', not 'pmf')")
    return validate_system(doc)


def parse_constraints(doc: Mapping) -> tuple[RealizationConstraints, Optional[list[Fraction]]]:
    """Returns the constraints and an explicit prior (``None`` for uniform)."""
    try:
        contents = list(doc["contents"])
        specs = list(doc["contexts"])
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}") from None
    if not specs:
        raise ValidationError("the measurement relation is empty")
    ctxs = []
    for spec in specs:
        if not isinstance(spec, Mapping) or "id" not in spec:
            raise ValidationError("every context needs an 'id'")
        if "allowed" not in spec:
            raise ValidationError(f"context {spec['id']!r} has no 'allowed' list", spec["id"])
        ctxs.append(ContextConstraint(spec["id"], tuple(spec.get("contents", ())),
                                      tuple(spec["allowed"])))
    rc = RealizationConstraints(tuple(contents), tuple(ctxs))
    prior = doc.get("prior", "uniform")
    if prior == "uniform":
        return rc, None
    if not isinstance(prior, list):
        raise ValidationError("'prior' must be \"uniform\" or a list of rationals")
    return rc, [to_fraction(p) for p in prior]


def locate(text: str, where: Optional[str]) -> Optional[int]:
    """1-based line of the first JSON string equal to ``where``."""
    if not where:
        return None
    pattern = re.compile(r'"id"\s*:\s*' + re.escape(json.dumps(where, ensure_ascii=False)))
    for pat in (pattern, re.compile(re.escape(json.dumps(where, ensure_ascii=False)))):
        m = pat.search(text)
        if m:
            return text.count("\n", 0, m.start()) + 1
    return None
