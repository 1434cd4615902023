"""Noncontextual fraction by exact linear programming.

An α-coupling of a consistently connected system is a sub-probability
vector ``s`` over global assignments (one ±1 value per content) with
``B s <= r``: for every context and bunch outcome, the mass of assignments
restricting to that outcome may not exceed its probability.  The largest
total mass ``1·s`` is the noncontextual fraction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .consistify import consistify
from .couplings import pairwise_max_equality
from .simplex import linprog_exact
from .system_model import (
    Outcome,
    System,
    connection,
    is_simply_consistently_connected,
    outcomes,
)

DEFAULT_MAX_COLUMNS = 2 ** 20


class SizeLimitError(RuntimeError):
    """The program would exceed the configured column limit."""


class PreconditionError(ValueError):
    """The input system does not satisfy the operation's precondition."""


@dataclass(frozen=True)
class IncidenceSystem:
    contents: tuple[str, ...]
    rows: tuple[tuple[str, Outcome], ...]
    columns: tuple[Outcome, ...]
    r: tuple[Fraction, ...]
    B: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.B.shape

    def row_of(self, context: str, outcome: Outcome) -> int:
        return self.rows.index((context, tuple(outcome)))

    def column_of(self, assignment: Outcome) -> int:
        return self.columns.index(tuple(assignment))


@dataclass(frozen=True)
class GlobalMassVector:
    """Sparse ``s``: only columns with positive mass are stored."""

    contents: tuple[str, ...]
    masses: Mapping[Outcome, Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))


@dataclass(frozen=True)
class FractionResult:
    alpha_max: Fraction
    contextual_fraction: Fraction
    noncontextual: bool
    strongly_contextual: bool
    witness: GlobalMassVector


def _check_size(n_contents: int, max_columns: int) -> None:
    if 2 ** n_contents > max_columns:
        raise SizeLimitError(
            f"{n_contents} contents give 2^{n_contents} columns, above the limit "
            f"of {max_columns}")


def _support_columns(system: System) -> list[Outcome]:
    """Global assignments whose restriction to every context has positive
    probability, in lexicographic order.  All other columns are forced to
    zero by a zero row of ``B s <= r``."""
    n = len(system.contents)
    pos = {q: i for i, q in enumerate(system.contents)}
    # per content: (bunch index, coordinate of the content inside that bunch)
    touching = [[] for _ in range(n)]
    for k, b in enumerate(system.bunches):
        for j, q in enumerate(b.contents):
            touching[pos[q]].append((k, j))
    cols: list[Outcome] = []
    assign = [0] * n

    def extend(i, cand):
        if i == n:
            cols.append(tuple(assign))
            return
        for v in (-1, 1):
            new = list(cand)
            for k, j in touching[i]:
                new[k] = [a for a in cand[k] if a[j] == v]
                if not new[k]:
                    break
            else:
                assign[i] = v
                extend(i + 1, new)

    extend(0, [list(b.pmf) for b in system.bunches])
    return cols


def build_incidence(system: System, max_columns: int = DEFAULT_MAX_COLUMNS,
                    support_only: bool = False) -> IncidenceSystem:
    """Incidence matrix ``B`` and probability vector ``r`` of a system.

    With ``support_only`` the zero rows of ``r`` and every column meeting
    one of them are dropped; the resulting program has the same optimum.
    """
    _check_size(len(system.contents), max_columns)
    pos = {q: i for i, q in enumerate(system.contents)}
    rows, r = [], []
    for b in system.bunches:
        for o in outcomes(b.size):
            p = b.pmf.get(o, Fraction(0))
            if p or not support_only:
                rows.append((b.context, o))
                r.append(p)
    if support_only:
        columns = _support_columns(system)
    else:
        columns = list(itertools.product((-1, 1), repeat=len(system.contents)))
    B = np.zeros((len(rows), len(columns)), dtype=bool)
    if columns:
        bits = (np.array(columns, dtype=np.int64) + 1) // 2
        row_no = {row: i for i, row in enumerate(rows)}
        all_cols = np.arange(len(columns))
        for b in system.bunches:
            # position of each column's restriction in the lexicographic outcome list
            code = np.zeros(len(columns), dtype=np.int64)
            for q in b.contents:
                code = 2 * code + bits[:, pos[q]]
            lookup = np.array([row_no.get((b.context, o), -1) for o in outcomes(b.size)])
            hit = lookup[code]
            keep = hit >= 0
            B[hit[keep], all_cols[keep]] = True
    return IncidenceSystem(tuple(system.contents), tuple(rows), tuple(columns),
                           tuple(r), B)


def simplex_max(objective: Optional[Sequence], incidence: IncidenceSystem
                ) -> tuple[Fraction, GlobalMassVector]:
    """Maximise ``objective·s`` over ``{s >= 0, B s <= r, 1·s <= 1}``.

    ``objective=None`` means the all-ones vector.
    """
    n = len(incidence.columns)
    c = [1] * n if objective is None else list(objective)
    if len(c) != n:
        raise ValueError(f"objective has {len(c)} entries, expected {n}")
    A_ub = [dict.fromkeys(np.flatnonzero(row).tolist(), 1) for row in incidence.B]
    A_ub.append(dict.fromkeys(range(n), 1))
    b_ub = list(incidence.r) + [Fraction(1)]
    res = linprog_exact(c, A_ub=A_ub, b_ub=b_ub, maximize=True)
    if not res.success:  # s = 0 is feasible and 1·s <= 1 bounds the polytope
        raise RuntimeError(f"unexpected LP status {res.status}")
    masses = {incidence.columns[j]: v for j, v in enumerate(res.x) if v}
    return res.value, GlobalMassVector(incidence.contents,
                                       MappingProxyType(dict(sorted(masses.items()))))


def _result(alpha: Fraction, witness: GlobalMassVector) -> FractionResult:
    return FractionResult(alpha, 1 - alpha, alpha == 1, alpha == 0, witness)


def noncontextual_fraction(system: System,
                           max_columns: int = DEFAULT_MAX_COLUMNS) -> FractionResult:
    """α_max of a consistently connected system (no consistification)."""
    cc = is_simply_consistently_connected(system)
    if not cc:
        raise PreconditionError(
            "system is inconsistently connected; use generalized_fraction "
            f"(violations: {cc.violations[:3]})")
    incidence = build_incidence(system, max_columns, support_only=True)
    alpha, witness = simplex_max(None, incidence)
    return _result(alpha, witness)


def generalized_fraction(system: System,
                         max_columns: int = DEFAULT_MAX_COLUMNS) -> FractionResult:
    """α_max of the consistification; defined for any system."""
    _check_size(len(system.relation), max_columns)
    return noncontextual_fraction(consistify(system).base, max_columns)


class Verdict(NamedTuple):
    noncontextual: bool
    witness: GlobalMassVector


def cbd_noncontextual(system: System,
                      max_columns: int = DEFAULT_MAX_COLUMNS) -> Verdict:
    res = generalized_fraction(system, max_columns)
    return Verdict(res.noncontextual, res.witness)


def cbd_feasibility_oracle(system: System, max_variables: int = 12) -> bool:
    """Decide directly whether a multimaximally connected coupling exists.

    Searches for a joint pmf over all variables R_q^c whose context-wise
    marginals are the bunches and in which every content-sharing pair is
    equal with its maximal probability.  Solved in floating point by HiGHS,
    independently of the consistification route.
    """
    from scipy.optimize import linprog

    variables = system.relation
    m = len(variables)
    if m > max_variables:
        raise SizeLimitError(f"{m} variables exceed the oracle limit of {max_variables}")
    var_no = {v: i for i, v in enumerate(variables)}
    states = np.array(list(itertools.product((-1, 1), repeat=m)), dtype=np.int8)
    rows, rhs = [], []
    for b in system.bunches:
        cols = [var_no[(q, b.context)] for q in b.contents]
        sub = states[:, cols]
        for o in outcomes(b.size):
            rows.append(np.all(sub == np.array(o), axis=1))
            rhs.append(float(b.pmf.get(o, 0)))
    for q in system.contents:
        members = connection(system, q).members
        for (c1, p1), (c2, p2) in itertools.combinations(members, 2):
            rows.append(states[:, var_no[(q, c1)]] == states[:, var_no[(q, c2)]])
            rhs.append(float(pairwise_max_equality(p1, p2)))
    A_eq = np.array(rows, dtype=float)
    res = linprog(np.zeros(len(states)), A_eq=A_eq, b_eq=np.array(rhs),
                  bounds=(0, None), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10})
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise RuntimeError(f"oracle LP failed: {res.message}")
