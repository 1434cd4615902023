"""Content/context systems of dichotomous random variables.

A system is a finite set of contents, a finite set of contexts, and for each
context a joint distribution (a *bunch*) over the ±1 values of the contents
measured in it.  All probabilities are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

Outcome = tuple[int, ...]
Pmf = Mapping[Outcome, Fraction]

VALUES = (-1, 1)


class ValidationError(ValueError):
    """Raised when a system description violates the data model.

    ``where`` names the offending context or content when one is known, so
    that front ends can point at the right place in a file.
    """

    def __init__(self, message: str, where: str | None = None):
        super().__init__(message)
        self.where = where


def outcomes(k: int) -> list[Outcome]:
    """All tuples in {-1,+1}^k, lexicographic with -1 before +1."""
    return list(itertools.product(VALUES, repeat=k))


def to_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise ValidationError(f"probability {value!r} is a float; use an exact rational")
    if isinstance(value, str):
        value = value.strip()
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational number: {value!r}") from exc


def parse_outcome(key, k: int | None = None) -> Outcome:
    """Accept ``"+-+"`` style strings, a bare ``+1``/``-1``, or ±1 tuples."""
    if isinstance(key, str):
        signs = {"+": 1, "-": -1, "−": -1}
        try:
            out = tuple(signs[ch] for ch in key.strip())
        except KeyError:
            raise ValidationError(f"outcome {key!r} is not over the alphabet {{+, -}}")
    elif isinstance(key, int) and not isinstance(key, bool):
        out = (key,)
    else:
        out = tuple(key)
    if any(v not in VALUES for v in out):
        raise ValidationError(f"outcome {key!r} has a value outside {{-1, +1}}")
    if k is not None and len(out) != k:
        raise ValidationError(f"outcome {key!r} has length {len(out)}, expected {k}")
    return out


def format_outcome(outcome: Outcome) -> str:
    return "".join("+" if v == 1 else "-" for v in outcome)


@dataclass(frozen=True)
class Bunch:
    """Joint distribution of the variables measured in one context.

    ``pmf`` is sparse: zero-probability outcomes are not stored.
    """

    context: str
    contents: tuple[str, ...]
    pmf: Pmf

    def __post_init__(self):
        object.__setattr__(self, "contents", tuple(self.contents))
        k = len(self.contents)
        if len(set(self.contents)) != k:
            raise ValidationError(f"context {self.context!r} lists a content twice",
                                  self.context)
        clean: dict[Outcome, Fraction] = {}
        for key, p in self.pmf.items():
            out = parse_outcome(key, k)
            p = to_fraction(p)
            if p < 0:
                raise ValidationError(
                    f"negative probability {p} in context {self.context!r}", self.context)
            if out in clean:
                raise ValidationError(
                    f"outcome {format_outcome(out)} given twice in context {self.context!r}",
                    self.context)
            if p:
                clean[out] = p
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise ValidationError(
                f"probabilities in context {self.context!r} sum to {total}, not 1",
                self.context)
        ordered = {o: clean[o] for o in sorted(clean)}
        object.__setattr__(self, "pmf", MappingProxyType(ordered))

    @property
    def size(self) -> int:
        return len(self.contents)

    def prob(self, outcome) -> Fraction:
        return self.pmf.get(parse_outcome(outcome, self.size), Fraction(0))

    def is_point_mass(self) -> bool:
        return len(self.pmf) == 1


@dataclass(frozen=True)
class Connection:
    """All variables sharing one content, with Pr[R_q^c = +1] per context."""

    content: str
    members: tuple[tuple[str, Fraction], ...]

    @property
    def contexts(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.members)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class System:
    contents: tuple[str, ...]
    contexts: tuple[str, ...]
    bunches: tuple[Bunch, ...]

    def __post_init__(self):
        object.__setattr__(self, "contents", tuple(self.contents))
        object.__setattr__(self, "contexts", tuple(self.contexts))
        object.__setattr__(self, "bunches", tuple(self.bunches))
        _check_ids(self.contents, "content")
        _check_ids(self.contexts, "context")
        if len(self.bunches) != len(self.contexts):
            raise ValidationError("exactly one bunch per context is required")
        known = set(self.contents)
        used: set[str] = set()
        for ctx, b in zip(self.contexts, self.bunches):
            if b.context != ctx:
                raise ValidationError(f"bunch for {b.context!r} is out of order", ctx)
            if not b.contents:
                raise ValidationError(f"context {ctx!r} measures no content", ctx)
            unknown = [q for q in b.contents if q not in known]
            if unknown:
                raise ValidationError(
                    f"context {ctx!r} measures undeclared contents {unknown}", ctx)
            used.update(b.contents)
        unused = [q for q in self.contents if q not in used]
        if unused:
            raise ValidationError(f"contents {unused} are not measured in any context",
                                  unused[0])
        object.__setattr__(self, "_by_context",
                           {b.context: b for b in self.bunches})

    @property
    def relation(self) -> tuple[tuple[str, str], ...]:
        """The pairs (q, c) with q measured in c, in context-major order."""
        return tuple((q, b.context) for b in self.bunches for q in b.contents)

    def measured_in(self, q: str) -> tuple[str, ...]:
        return tuple(b.context for b in self.bunches if q in b.contents)


def _check_ids(ids: Sequence[str], kind: str) -> None:
    seen = set()
    for x in ids:
        if not isinstance(x, str) or not x:
            raise ValidationError(f"{kind} id {x!r} must be a non-empty string")
        if x in seen:
            raise ValidationError(f"duplicate {kind} id {x!r}", x)
        seen.add(x)


def make_system(contents: Iterable[str],
                bunches: Mapping[str, tuple[Sequence[str], Mapping]]) -> System:
    """Shorthand constructor: ``bunches`` maps context -> (contents, pmf)."""
    return System(tuple(contents), tuple(bunches),
                  tuple(Bunch(c, tuple(qs), pmf) for c, (qs, pmf) in bunches.items()))


def validate_system(raw: Mapping) -> System:
    """Build a :class:`System` from a parsed description.

    ``raw`` has ``contents`` (list of ids) and ``contexts`` (list of objects
    with ``id``, ``contents`` and ``pmf``).  An optional ``relation`` list of
    ``[content, context]`` pairs is checked against the context lists.
    Outcomes missing from a pmf have probability 0.
    """
    if not isinstance(raw, Mapping):
        raise ValidationError("system description must be an object")
    try:
        contents = list(raw["contents"])
        ctx_specs = list(raw["contexts"])
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}") from None
    if not ctx_specs:
        raise ValidationError("the measurement relation is empty")
    bunches = []
    for spec in ctx_specs:
        if not isinstance(spec, Mapping) or "id" not in spec:
            raise ValidationError("every context needs an 'id'")
        cid = spec["id"]
        if "pmf" not in spec:
            raise ValidationError(f"context {cid!r} has no 'pmf'", cid)
        if not isinstance(spec["pmf"], Mapping):
            raise ValidationError(f"pmf of context {cid!r} must be an object", cid)
        bunches.append(Bunch(cid, tuple(spec.get("contents", ())), spec["pmf"]))
    system = System(tuple(contents), tuple(b.context for b in bunches), tuple(bunches))
    if "relation" in raw:
        given = {tuple(pair) for pair in raw["relation"]}
        if given != set(system.relation):
            raise ValidationError("bunch contents do not match the declared relation")
    return system


def bunch(system: System, c: str) -> Bunch:
    try:
        return system._by_context[c]
    except KeyError:
        raise KeyError(f"unknown context {c!r}") from None


def marginal(b: Bunch, subset: Sequence[str]) -> dict[Outcome, Fraction]:
    """Exact marginal of ``b`` onto ``subset`` (in the order given)."""
    try:
        idx = [b.contents.index(q) for q in subset]
    except ValueError:
        missing = [q for q in subset if q not in b.contents]
        raise ValueError(f"{missing} not measured in context {b.context!r}") from None
    out: dict[Outcome, Fraction] = {}
    for o, p in b.pmf.items():
        key = tuple(o[i] for i in idx)
        out[key] = out.get(key, Fraction(0)) + p
    return {k: out[k] for k in sorted(out)}


def plus_probability(b: Bunch, q: str) -> Fraction:
    return marginal(b, [q]).get((1,), Fraction(0))


def connection(system: System, q: str) -> Connection:
    if q not in system.contents:
        raise KeyError(f"unknown content {q!r}")
    return Connection(q, tuple((b.context, plus_probability(b, q))
                               for b in system.bunches if q in b.contents))


class Connectedness(NamedTuple):
    ok: bool
    violations: list

    def __bool__(self) -> bool:
        return self.ok


def is_simply_consistently_connected(system: System) -> Connectedness:
    """Violations are ``(content, (context, context'))`` pairs."""
    violations = []
    for q in system.contents:
        members = connection(system, q).members
        for (c1, p1), (c2, p2) in itertools.combinations(members, 2):
            if p1 != p2:
                violations.append((q, (c1, c2)))
    return Connectedness(not violations, violations)


def is_strongly_consistently_connected(system: System) -> Connectedness:
    """Violations are ``(shared contents, (context, context'))`` pairs."""
    violations = []
    for b1, b2 in itertools.combinations(system.bunches, 2):
        shared = tuple(q for q in system.contents
                       if q in b1.contents and q in b2.contents)
        if shared and marginal(b1, shared) != marginal(b2, shared):
            violations.append((shared, (b1.context, b2.context)))
    return Connectedness(not violations, violations)


def is_deterministic(system: System) -> bool:
    return all(b.is_point_mass() for b in system.bunches)
