"""Exact rational simplex method (two-phase, Bland's rule).

Rows of the tableau are kept as sparse dicts ``{column: Fraction}`` because
the programs built from incidence matrices are mostly zeros.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

Row = Union[Mapping[int, object], Sequence[object]]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[tuple[Fraction, ...]] = None

    @property
    def success(self) -> bool:
        return self.status == OPTIMAL


def _sparse(row: Row) -> dict[int, Fraction]:
    items = row.items() if isinstance(row, Mapping) else enumerate(row)
    out = {}
    for j, v in items:
        v = Fraction(v)
        if v:
            out[int(j)] = v
    return out


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.d: dict[int, Fraction] = {}
        self.z = Fraction(0)

    def price(self, cost: Mapping[int, Fraction]) -> None:
        """Reduced costs of ``cost`` with respect to the current basis."""
        d = {j: v for j, v in cost.items() if v}
        z = Fraction(0)
        for i, b in enumerate(self.basis):
            cb = cost.get(b, 0)
            if not cb:
                continue
            z += cb * self.rhs[i]
            for j, a in self.rows[i].items():
                nv = d.get(j, 0) - cb * a
                if nv:
                    d[j] = nv
                else:
                    d.pop(j, None)
        for b in self.basis:
            d.pop(b, None)
        self.d, self.z = d, z

    def pivot(self, r: int, col: int) -> None:
        prow = self.rows[r]
        piv = prow[col]
        if piv != 1:
            prow = {j: v / piv for j, v in prow.items()}
            self.rows[r] = prow
            self.rhs[r] /= piv
        br = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(col)
            if f is None:
                continue
            for j, v in prow.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            self.rhs[i] -= f * br
        f = self.d.get(col)
        if f is not None:
            d = self.d
            for j, v in prow.items():
                nv = d.get(j, 0) - f * v
                if nv:
                    d[j] = nv
                else:
                    d.pop(j, None)
            self.z += f * br
        self.basis[r] = col

    def run(self, allowed: Optional[int] = None) -> str:
        """Maximize with Bland's rule; columns >= ``allowed`` never enter."""
        while True:
            entering = None
            for j, v in self.d.items():
                if v > 0 and (allowed is None or j < allowed):
                    if entering is None or j < entering:
                        entering = j
            if entering is None:
                return OPTIMAL
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is None or a <= 0:
                    continue
                ratio = self.rhs[i] / a
                if (best is None or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])):
                    best, leave = ratio, i
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, entering)


def linprog_exact(c: Sequence[object],
                  A_ub: Optional[Sequence[Row]] = None,
                  b_ub: Optional[Sequence[object]] = None,
                  A_eq: Optional[Sequence[Row]] = None,
                  b_eq: Optional[Sequence[object]] = None,
                  maximize: bool = True) -> LPResult:
    """Solve ``c.x -> max`` (or min) subject to ``A_ub x <= b_ub``,
    ``A_eq x == b_eq`` and ``x >= 0`` in exact rational arithmetic.

    Rows may be dense sequences or sparse ``{column: value}`` mappings.
    The pivot rule is Bland's, so the returned vertex is a deterministic
    function of the input.
    """
    n = len(c)
    cost = {j: Fraction(v) for j, v in enumerate(c) if Fraction(v)}
    if not maximize:
        cost = {j: -v for j, v in cost.items()}
    A_ub = list(A_ub or [])
    A_eq = list(A_eq or [])
    b_ub = [Fraction(v) for v in (b_ub or [])]
    b_eq = [Fraction(v) for v in (b_eq or [])]
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix and right-hand side differ in length")

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    need_art: list[int] = []
    n_slack = len(A_ub)
    for k, (row, b) in enumerate(zip(A_ub, b_ub)):
        row = _sparse(row)
        if any(j >= n for j in row):
            raise ValueError("column index out of range")
        row[n + k] = Fraction(1)
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
            need_art.append(len(rows))
            basis.append(-1)
        else:
            basis.append(n + k)
        rows.append(row)
        rhs.append(b)
    for row, b in zip(A_eq, b_eq):
        row = _sparse(row)
        if any(j >= n for j in row):
            raise ValueError("column index out of range")
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
        need_art.append(len(rows))
        basis.append(-1)
        rows.append(row)
        rhs.append(b)

    first_art = n + n_slack
    for a, i in enumerate(need_art):
        rows[i][first_art + a] = Fraction(1)
        basis[i] = first_art + a
    tab = _Tableau(rows, rhs, basis)

    if need_art:
        tab.price({first_art + a: Fraction(-1) for a in range(len(need_art))})
        tab.run()
        if tab.z != 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= first_art:
                col = min((j for j in tab.rows[i] if j < first_art), default=None)
                if col is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1
        for row in tab.rows:
            for j in [j for j in row if j >= first_art]:
                del row[j]

    tab.price(cost)
    status = tab.run(allowed=first_art)
    if status != OPTIMAL:
        return LPResult(status)
    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rhs[i]
    value = tab.z if maximize else -tab.z
    return LPResult(OPTIMAL, value, tuple(x))
