"""Deterministic systems and their epistemic (Bayesian) mixtures.

A constraint-specified system lists, per context, the outcome tuples that
are admissible.  Each choice of one admissible tuple per context is a
deterministic realization; a prior over realizations turns the family into
an ordinary probabilistic system.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .lp import GlobalMassVector, cbd_noncontextual
from .system_model import (
    Bunch,
    Outcome,
    System,
    ValidationError,
    is_deterministic,
    parse_outcome,
    to_fraction,
)


class EmptyFamilyError(ValueError):
    """No deterministic realization satisfies the constraints."""


@dataclass(frozen=True)
class ContextConstraint:
    context: str
    contents: tuple[str, ...]
    allowed: tuple[Outcome, ...]

    def __post_init__(self):
        k = len(self.contents)
        tuples = {parse_outcome(o, k) for o in self.allowed}
        object.__setattr__(self, "contents", tuple(self.contents))
        object.__setattr__(self, "allowed", tuple(sorted(tuples)))


@dataclass(frozen=True)
class RealizationConstraints:
    contents: tuple[str, ...]
    contexts: tuple[ContextConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "contents", tuple(self.contents))
        object.__setattr__(self, "contexts", tuple(self.contexts))
        # same structural checks as a system; a point mass stands in for the pmf
        System(self.contents, tuple(c.context for c in self.contexts),
               tuple(Bunch(c.context, c.contents, {(1,) * len(c.contents): 1})
                     for c in self.contexts))

    @property
    def empty_contexts(self) -> tuple[str, ...]:
        return tuple(c.context for c in self.contexts if not c.allowed)

    @property
    def count(self) -> int:
        n = 1
        for c in self.contexts:
            n *= len(c.allowed)
        return n


@dataclass(frozen=True)
class RealizationFamily:
    """Deterministic realizations with a prior; empty when N = 0."""

    constraints: RealizationConstraints
    realizations: tuple[System, ...]
    prior: tuple[Fraction, ...]
    empty_contexts: tuple[str, ...] = field(default=())

    def __post_init__(self):
        prior = tuple(to_fraction(p) for p in self.prior)
        object.__setattr__(self, "prior", prior)
        if len(prior) != len(self.realizations):
            raise ValidationError(
                f"prior has {len(prior)} entries for {len(self.realizations)} realizations")
        if any(p < 0 for p in prior):
            raise ValidationError("prior has a negative entry")
        if prior and sum(prior) != 1:
            raise ValidationError(f"prior sums to {sum(prior)}, not 1")

    def __len__(self) -> int:
        return len(self.realizations)

    @property
    def is_empty(self) -> bool:
        return not self.realizations

    def with_prior(self, prior: Sequence) -> "RealizationFamily":
        return RealizationFamily(self.constraints, self.realizations, tuple(prior),
                                 self.empty_contexts)


def _realization(rc: RealizationConstraints, choice: Sequence[Outcome]) -> System:
    return System(rc.contents, tuple(c.context for c in rc.contexts),
                  tuple(Bunch(c.context, c.contents, {o: 1})
                        for c, o in zip(rc.contexts, choice)))


def enumerate_realizations(rc: RealizationConstraints) -> RealizationFamily:
    """All deterministic realizations, lexicographic over contexts then
    tuples, with the uniform prior.  An empty family is returned (not
    raised) when some context admits no tuple."""
    empty = rc.empty_contexts
    if empty:
        return RealizationFamily(rc, (), (), empty)
    choices = list(itertools.product(*(c.allowed for c in rc.contexts)))
    n = len(choices)
    return RealizationFamily(rc, tuple(_realization(rc, ch) for ch in choices),
                             (Fraction(1, n),) * n)


def epistemic_mixture(family: RealizationFamily) -> System:
    if family.is_empty:
        raise EmptyFamilyError(
            f"no deterministic realization (empty contexts: {list(family.empty_contexts)})")
    first = family.realizations[0]
    pmfs: list[dict[Outcome, Fraction]] = [{} for _ in first.bunches]
    for system, weight in zip(family.realizations, family.prior):
        if system.contexts != first.contexts or system.relation != first.relation:
            raise ValidationError("realizations do not share one format")
        if not is_deterministic(system):
            raise ValidationError("family contains a non-deterministic system")
        for k, b in enumerate(system.bunches):
            (o,) = b.pmf
            pmfs[k][o] = pmfs[k].get(o, Fraction(0)) + weight
    return System(first.contents, first.contexts,
                  tuple(Bunch(b.context, b.contents, pmf)
                        for b, pmf in zip(first.bunches, pmfs)))


def liar_system(n: int = 3) -> RealizationConstraints:
    """Cyclic Liar constraints: q_i says "q_{i+1} is true" for i < n and
    q_n says "q_1 is false".  Context c_i holds q_i and q_{i+1}; the closing
    context holds (q_1, q_n)."""
    if n < 3:
        raise ValueError("liar_system needs n >= 3; encode smaller cycles explicitly")
    qs = tuple(f"q{i}" for i in range(1, n + 1))
    same = ((-1, -1), (1, 1))
    opposite = ((-1, 1), (1, -1))
    ctxs = [ContextConstraint(f"c{i}", (qs[i - 1], qs[i]), same) for i in range(1, n)]
    ctxs.append(ContextConstraint(f"c{n}", (qs[0], qs[-1]), opposite))
    return RealizationConstraints(qs, tuple(ctxs))


@dataclass(frozen=True)
class DeterministicVerdict:
    noncontextual: bool
    coupling: Mapping[tuple[str, str], int]
    witness: Optional[GlobalMassVector] = None


def assert_deterministic_noncontextual(system: System) -> DeterministicVerdict:
    """Confirm by LP that a deterministic system is noncontextual.

    The returned coupling is the only one there is: every S_q^c fixed at the
    value of R_q^c.
    """
    if not is_deterministic(system):
        raise ValueError("system is not deterministic")
    verdict = cbd_noncontextual(system)
    if not verdict.noncontextual:
        raise AssertionError("deterministic system reported contextual")
    coupling = {}
    for b in system.bunches:
        (o,) = b.pmf
        coupling.update({(q, b.context): v for q, v in zip(b.contents, o)})
    return DeterministicVerdict(True, coupling, verdict.witness)
