"""Row reduction over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns, computed exactly."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        row = m[r]
        nz = [j for j in range(c, ncols) if row[j] != 0]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                mi = m[i]
                for j in nz:
                    mi[j] -= f * row[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """A basis of {x : rows . x = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
