"""Multimaximal couplings of connections of dichotomous variables.

The coupling is built by the quantile (comonotone) construction: a single
uniform variable U on (0, 1] drives every coordinate, with T_i = +1 iff
U <= p_i.  An exact-LP oracle independently checks that the result is the
only coupling attaining every pairwise maximum.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .simplex import linprog_exact
from .system_model import Connection, Outcome, outcomes, parse_outcome, to_fraction


class CouplingError(ValueError):
    pass


@dataclass(frozen=True)
class JointPmf:
    """Joint distribution of labelled ±1 variables; zero atoms omitted."""

    variables: tuple[str, ...]
    pmf: Mapping[Outcome, Fraction]

    def __post_init__(self):
        n = len(self.variables)
        clean = {}
        for key, p in self.pmf.items():
            out = parse_outcome(key, n)
            p = to_fraction(p)
            if p < 0:
                raise CouplingError(f"negative mass {p}")
            if p:
                clean[out] = clean.get(out, Fraction(0)) + p
        if sum(clean.values(), Fraction(0)) != 1:
            raise CouplingError("joint pmf does not sum to 1")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "pmf",
                           MappingProxyType({o: clean[o] for o in sorted(clean)}))

    def prob_plus(self, i: int) -> Fraction:
        return sum((p for o, p in self.pmf.items() if o[i] == 1), Fraction(0))

    def prob_equal(self, idx: Sequence[int]) -> Fraction:
        """Pr[T_i all equal for i in idx]."""
        return sum((p for o, p in self.pmf.items()
                    if len({o[i] for i in idx}) <= 1), Fraction(0))

    def project(self, idx: Sequence[int]) -> "JointPmf":
        out: dict[Outcome, Fraction] = {}
        for o, p in self.pmf.items():
            key = tuple(o[i] for i in idx)
            out[key] = out.get(key, Fraction(0)) + p
        return JointPmf(tuple(self.variables[i] for i in idx), out)


@dataclass(frozen=True)
class CouplingReport:
    pairwise_equalities: Mapping[tuple[int, int], Fraction]
    chain_equality: Fraction


def _check_probability(p) -> Fraction:
    p = to_fraction(p)
    if not 0 <= p <= 1:
        raise CouplingError(f"probability {p} outside [0, 1]")
    return p


def pairwise_max_equality(p, p2) -> Fraction:
    """Largest Pr[X = Y] over couplings of X, Y with Pr[+1] = p, p2."""
    p, p2 = _check_probability(p), _check_probability(p2)
    return 1 - abs(p - p2)


def multimaximal_coupling(connection: Connection) -> JointPmf:
    ps = [_check_probability(p) for p in connection.probabilities]
    if not ps:
        raise CouplingError(f"connection {connection.content!r} is empty")
    cuts = sorted(set(ps) | {Fraction(0), Fraction(1)})
    pmf = {}
    for lo, hi in zip(cuts, cuts[1:]):
        # U in (lo, hi]: coordinate i is +1 exactly when p_i >= hi
        pmf[tuple(1 if p >= hi else -1 for p in ps)] = hi - lo
    return JointPmf(connection.contexts, pmf)


def max_chain_equality(connection: Connection) -> Fraction:
    ps = [_check_probability(p) for p in connection.probabilities]
    if not ps:
        raise CouplingError(f"connection {connection.content!r} is empty")
    return min(ps) + min(1 - p for p in ps)


def coupling_report(j: JointPmf) -> CouplingReport:
    n = len(j.variables)
    pairs = {(a, b): j.prob_equal((a, b)) for a, b in itertools.combinations(range(n), 2)}
    return CouplingReport(MappingProxyType(pairs), j.prob_equal(range(n)))


def verify_multimaximal(j: JointPmf, connection: Connection) -> bool:
    ps = connection.probabilities
    if len(j.variables) != len(ps):
        raise CouplingError(
            f"coupling has {len(j.variables)} variables, connection has {len(ps)}")
    if any(j.prob_plus(i) != p for i, p in enumerate(ps)):
        return False
    return all(j.prob_equal((a, b)) == pairwise_max_equality(ps[a], ps[b])
               for a, b in itertools.combinations(range(len(ps)), 2))


def _coupling_constraints(ps: Sequence[Fraction]):
    atoms = outcomes(len(ps))
    A_eq = [[1] * len(atoms)]
    b_eq: list[Fraction] = [Fraction(1)]
    for i, p in enumerate(ps):
        A_eq.append([1 if a[i] == 1 else 0 for a in atoms])
        b_eq.append(p)
    for i, k in itertools.combinations(range(len(ps)), 2):
        A_eq.append([1 if a[i] == a[k] else 0 for a in atoms])
        b_eq.append(1 - abs(ps[i] - ps[k]))
    return atoms, A_eq, b_eq


def oracle_unique_multimaximal(connection: Connection, max_n: int = 4) -> JointPmf:
    """Brute-force check of uniqueness for small connections.

    Each atom's mass is minimised and maximised by exact LP over all pmfs on
    {-1,+1}^n with the given marginals and every pairwise equality at its
    maximum; the feasible set is a single point iff every min equals its max.
    """
    ps = [_check_probability(p) for p in connection.probabilities]
    if not 1 <= len(ps) <= max_n:
        raise CouplingError(f"oracle handles 1..{max_n} variables, got {len(ps)}")
    atoms, A_eq, b_eq = _coupling_constraints(ps)
    point = {}
    for k, atom in enumerate(atoms):
        c = [0] * len(atoms)
        c[k] = 1
        hi = linprog_exact(c, A_eq=A_eq, b_eq=b_eq, maximize=True)
        if not hi.success:
            raise CouplingError(f"no multimaximal coupling found ({hi.status})")
        lo = linprog_exact(c, A_eq=A_eq, b_eq=b_eq, maximize=False)
        if lo.value != hi.value:
            raise CouplingError(
                f"atom {atom} ranges over [{lo.value}, {hi.value}]: not unique")
        point[atom] = hi.value
    return JointPmf(connection.contexts, point)
