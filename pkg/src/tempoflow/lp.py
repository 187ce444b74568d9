"""Exact rational linear programming via the two-phase simplex method.

Small and dense on purpose: the feasibility systems built from the
hardness gadgets have at most a few hundred rows, and exactness matters
more than speed there.  Bland's rule guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    x: list[Fraction]
    objective: Fraction | None


def _pivot(rows: list[list[Fraction]], z: list[Fraction], basis: list[int], r: int, c: int) -> None:
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    for i, row in enumerate(rows):
        if i != r and row[c]:
            f = row[c]
            rows[i] = [v - f * p for v, p in zip(row, rows[r])]
    if z[c]:
        f = z[c]
        z[:] = [v - f * p for v, p in zip(z, rows[r])]
    basis[r] = c


def _optimize(rows: list[list[Fraction]], z: list[Fraction], basis: list[int], ncols: int) -> str:
    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            return OPTIMAL
        leave = None
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                # Bland tie-break on the basic variable index prevents cycling.
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED
        _pivot(rows, z, basis, leave, enter)


def solve_lp(
    c: Row,
    A_ub: Sequence[Row] = (),
    b_ub: Row = (),
    A_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> LpResult:
    """Minimize c.x subject to A_ub x <= b_ub, A_eq x = b_eq and x >= 0."""
    n = len(c)
    nslack = len(A_ub)
    ncols = n + nslack
    rows: list[list[Fraction]] = []
    for i, (a, b) in enumerate(zip(A_ub, b_ub)):
        row = [Fraction(v) for v in a] + [Fraction(0)] * nslack + [Fraction(b)]
        row[n + i] = Fraction(1)
        rows.append(row)
    for a, b in zip(A_eq, b_eq):
        rows.append([Fraction(v) for v in a] + [Fraction(0)] * nslack + [Fraction(b)])
    for row in rows:
        if row[-1] < 0:
            row[:] = [-v for v in row]

    # Phase 1: one artificial per row, minimize their sum.
    m = len(rows)
    total = ncols + m
    for i, row in enumerate(rows):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        row[-1:-1] = art
    basis = [ncols + i for i in range(m)]
    z = [Fraction(0)] * (total + 1)
    for row in rows:
        for j in range(total + 1):
            z[j] -= row[j]
    for j in range(ncols, total):
        z[j] = Fraction(0)
    status = _optimize(rows, z, basis, total)
    assert status == OPTIMAL, "phase 1 is bounded below by zero"
    if -z[-1] != 0:
        return LpResult(INFEASIBLE, [], None)

    # Drive leftover artificials out of the basis; rows that cannot pivot
    # anywhere are redundant equalities and are dropped.
    for i in reversed(range(len(rows))):
        if basis[i] >= ncols:
            col = next((j for j in range(ncols) if rows[i][j]), None)
            if col is None:
                del rows[i], basis[i]
            else:
                _pivot(rows, z, basis, i, col)
    for row in rows:
        del row[ncols:-1]

    z = [Fraction(v) for v in c] + [Fraction(0)] * (nslack + 1)
    for i, b in enumerate(basis):
        if z[b]:
            f = z[b]
            z[:] = [v - f * p for v, p in zip(z, rows[i])]
    status = _optimize(rows, z, basis, ncols)
    if status != OPTIMAL:
        return LpResult(UNBOUNDED, [], None)
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = rows[i][-1]
    obj = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LpResult(OPTIMAL, x, obj)
