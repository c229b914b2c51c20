"""Exact rational simplex: two phases, Bland's rule, dual values.

Solves ``max c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq`` where variables are
nonnegative unless listed in ``free``.  All arithmetic is on Fractions, and
Bland's smallest-index rule on both the entering and the leaving choice
guarantees termination on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] = field(default_factory=list)
    objective: Fraction | None = None
    duals_ub: list[Fraction] = field(default_factory=list)
    duals_eq: list[Fraction] = field(default_factory=list)
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.T = [row + [b] for row, b in zip(rows, rhs)]
        self.basis = basis
        self.ncols = len(rows[0]) if rows else 0
        self.obj: list[Fraction] = []
        self.pivots = 0

    def set_objective(self, cost: Sequence[Fraction]):
        # obj[j] = reduced cost of column j; obj[-1] = -(objective value)
        obj = list(cost) + [Fraction(0)]
        for r, bv in enumerate(self.basis):
            cb = obj[bv]
            if cb:
                row = self.T[r]
                obj = [o - cb * v for o, v in zip(obj, row)]
        self.obj = obj

    def pivot(self, r: int, col: int):
        row = self.T[r]
        piv = row[col]
        if piv != 1:
            row = [v / piv for v in row]
            self.T[r] = row
        # tableau rows are mostly zero; touch only the pivot row's support
        nz = [(j, v) for j, v in enumerate(row) if v]
        for i, other in enumerate(self.T):
            if i != r:
                f = other[col]
                if f:
                    for j, v in nz:
                        other[j] -= f * v
        f = self.obj[col]
        if f:
            obj = self.obj
            for j, v in nz:
                obj[j] -= f * v
        self.basis[r] = col
        self.pivots += 1

    def run(self, allowed: Sequence[bool]) -> str:
        while True:
            col = next((j for j in range(self.ncols) if allowed[j] and self.obj[j] > 0), None)
            if col is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.T):
                a = row[col]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], col)


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Iterable[int] = (),
) -> LPResult:
    n = len(c)
    free = sorted(set(free))
    # column layout: original variables, negative parts of free ones, slacks, artificials
    neg_col = {v: n + t for t, v in enumerate(free)}
    nstruct = n + len(free)
    n_ub, n_eq = len(A_ub), len(A_eq)
    m = n_ub + n_eq

    def struct_row(a: Sequence) -> list[Fraction]:
        if len(a) != n:
            raise ValueError(f"constraint row has {len(a)} entries, expected {n}")
        row = [Fraction(v) for v in a] + [Fraction(0)] * len(free)
        for v, nc in neg_col.items():
            row[nc] = -row[v]
        return row

    rows, rhs, signs, needs_art = [], [], [], []
    for i in range(m):
        if i < n_ub:
            row = struct_row(A_ub[i]) + [Fraction(int(s == i)) for s in range(n_ub)]
            b = Fraction(b_ub[i])
        else:
            row = struct_row(A_eq[i - n_ub]) + [Fraction(0)] * n_ub
            b = Fraction(b_eq[i - n_ub])
        sign = -1 if b < 0 else 1
        if sign < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        signs.append(sign)
        needs_art.append(i >= n_ub or sign < 0)

    art_rows = [i for i in range(m) if needs_art[i]]
    nart = len(art_rows)
    ncols = nstruct + n_ub + nart
    id_col = []
    for i in range(m):
        rows[i] = rows[i] + [Fraction(0)] * nart
    for t, i in enumerate(art_rows):
        rows[i][nstruct + n_ub + t] = Fraction(1)
    for i in range(m):
        id_col.append(nstruct + n_ub + art_rows.index(i) if needs_art[i] else nstruct + i)

    tab = _Tableau(rows, rhs, list(id_col))
    is_art = [j >= nstruct + n_ub for j in range(ncols)]

    if nart:
        tab.set_objective([Fraction(-1) if is_art[j] else Fraction(0) for j in range(ncols)])
        tab.run([True] * ncols)
        if tab.obj[-1] != 0:  # phase-one optimum -sum(art) < 0
            return LPResult(INFEASIBLE, pivots=tab.pivots)
        for r in range(m):
            if is_art[tab.basis[r]]:
                col = next((j for j in range(ncols) if not is_art[j] and tab.T[r][j] != 0), None)
                if col is not None:
                    tab.pivot(r, col)

    cost = [Fraction(v) for v in c] + [-Fraction(c[v]) for v in free] + [Fraction(0)] * (n_ub + nart)
    tab.set_objective(cost)
    status = tab.run([not a for a in is_art])
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)

    values = [Fraction(0)] * ncols
    for r, bv in enumerate(tab.basis):
        values[bv] = tab.T[r][-1]
    x = values[:n]
    for v, nc in neg_col.items():
        x[v] -= values[nc]
    duals = []
    for i in range(m):
        col = id_col[i]
        y = sum((cost[bv] * tab.T[r][col] for r, bv in enumerate(tab.basis)), Fraction(0))
        duals.append(signs[i] * y)
    objective = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, objective, duals[:n_ub], duals[n_ub:], tab.pivots)


def feasible_point(
    n: int,
    A_eq: Sequence[Sequence],
    b_eq: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
) -> list[Fraction] | None:
    """A vertex of ``{x >= 0 : A_eq x = b_eq, A_ub x <= b_ub}``, or None."""
    res = maximize([0] * n, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.status == OPTIMAL else None
