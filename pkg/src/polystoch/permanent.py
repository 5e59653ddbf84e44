"""Exact s-permanents, transversals and mixed transversals.

The 1-permanent is evaluated by depth-first assignment: the first coordinate
runs through 0..n-1 in order and, for each value, a nonzero entry of that
hyperplane whose remaining coordinates are all unused is chosen.  Used values
are kept as one bitmask per axis, and subtrees are memoised on the tuple of
masks, so identical partial states are evaluated once.  Entries are scaled
to integers by their common denominator before the search.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import Budget, resolve_cap
from .exact_cover import exact_covers
from .latin import Cell, LatinHypercube, p_of_h
from .tensor import Tensor, common_denominator, linear_combination

Index = tuple[int, ...]


@dataclass(frozen=True)
class Diagonal:
    """An s-diagonal: n^s cells, no two agreeing on any s coordinate positions."""

    s: int
    cells: tuple[Index, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(int(x) for x in c) for c in self.cells))

    def validate(self, dim: int, order: int) -> None:
        if len(self.cells) != order**self.s:
            raise ValueError(f"an {self.s}-diagonal has {order ** self.s} cells, got {len(self.cells)}")
        for c in self.cells:
            if len(c) != dim or any(not 0 <= x < order for x in c):
                raise ValueError(f"cell {c} out of range")
        for axes in itertools.combinations(range(dim), self.s):
            proj = {tuple(c[a] for a in axes) for c in self.cells}
            if len(proj) != len(self.cells):
                raise ValueError(f"two cells share coordinates on axes {axes}")

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.cells]


@dataclass(frozen=True)
class PermanentResult:
    value: Fraction
    diagonal_count: int
    witness: Diagonal | None


def _hyperplane_rows(A: Tensor, scale: int) -> list[list[tuple[Index, int]]]:
    """Nonzero entries of each first-axis hyperplane, as (other coords, integer value)."""
    rows: list[list[tuple[Index, int]]] = [[] for _ in range(A.order)]
    for ix, v in A.nonzero():
        w = v * scale
        rows[ix[0]].append((ix[1:], w.numerator))
    return rows


class _DiagonalSearch:
    def __init__(self, rows, n: int, d: int):
        self.rows = rows
        self.n = n
        self.d = d
        self.memo: dict[tuple[int, ...], tuple[int, int]] = {}

    def _candidates(self, i, masks):
        for rest, v in self.rows[i]:
            if all(not (m >> c) & 1 for m, c in zip(masks, rest)):
                yield rest, v

    def solve(self, i: int, masks: tuple[int, ...]) -> tuple[int, int]:
        """(sum of products, number of positive diagonals) below this state."""
        if i == self.n:
            return 1, 1
        hit = self.memo.get(masks)
        if hit is not None:
            return hit
        val = cnt = 0
        for rest, v in self._candidates(i, masks):
            sv, sc = self.solve(i + 1, tuple(m | 1 << c for m, c in zip(masks, rest)))
            val += v * sv
            if v > 0:
                cnt += sc
        self.memo[masks] = (val, cnt)
        return val, cnt

    def witness(self) -> list[Index]:
        cells, masks = [], (0,) * (self.d - 1)
        for i in range(self.n):
            for rest, v in self._candidates(i, masks):
                nxt = tuple(m | 1 << c for m, c in zip(masks, rest))
                if v > 0 and self.solve(i + 1, nxt)[1] > 0:
                    cells.append((i,) + rest)
                    masks = nxt
                    break
            else:  # pragma: no cover - guarded by the caller
                raise AssertionError("no positive diagonal to report")
        return cells


def _branch(args):
    rows, n, d, branch = args
    search = _DiagonalSearch(rows, n, d)
    rest, v = branch
    masks = tuple(1 << c for c in rest)
    sv, sc = search.solve(1, masks)
    return v * sv, sc if v > 0 else 0


def permanent1(A: Tensor, workers: int | None = None) -> PermanentResult:
    """Sum over all 1-diagonals of the product of their entries.

    ``workers > 1`` splits the first hyperplane's choices across processes;
    the result does not depend on the number of workers.
    """
    if A.dim < 2:
        raise ValueError("the permanent needs dim >= 2")
    n, d = A.order, A.dim
    scale = common_denominator(A)
    rows = _hyperplane_rows(A, scale)
    search = _DiagonalSearch(rows, n, d)
    if workers and workers > 1 and n > 1:
        jobs = [(rows, n, d, b) for b in rows[0]]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_branch, jobs))
        val = sum(p[0] for p in parts)
        cnt = sum(p[1] for p in parts)
        witness = Diagonal(1, _first_positive(_positive_rows(A), n, d)) if cnt else None
    else:
        val, cnt = search.solve(0, (0,) * (d - 1))
        witness = Diagonal(1, search.witness()) if cnt else None
    return PermanentResult(Fraction(val, scale**n), cnt, witness)


def iter_positive_diagonals(A: Tensor) -> Iterator[list[Index]]:
    """Every positive 1-diagonal in enumeration order (no memoisation)."""
    n, d = A.order, A.dim
    rows = [[(ix[1:], v) for ix, v in A.nonzero() if ix[0] == i and v > 0] for i in range(n)]
    chosen: list[Index] = []

    def rec(i, masks):
        if i == n:
            yield list(chosen)
            return
        for rest, _ in rows[i]:
            if all(not (m >> c) & 1 for m, c in zip(masks, rest)):
                chosen.append((i,) + rest)
                yield from rec(i + 1, tuple(m | 1 << c for m, c in zip(masks, rest)))
                chosen.pop()

    yield from rec(0, (0,) * (d - 1))


def _first_positive(rows: list[list[Index]], n: int, d: int) -> list[Index] | None:
    """Depth-first search for a diagonal through the given cells, with dead-state memo."""
    dead: set[tuple[int, ...]] = set()
    chosen: list[Index] = []

    def rec(i, masks):
        if i == n:
            return True
        if masks in dead:
            return False
        for rest in rows[i]:
            if all(not (m >> c) & 1 for m, c in zip(masks, rest)):
                chosen.append((i,) + rest)
                if rec(i + 1, tuple(m | 1 << c for m, c in zip(masks, rest))):
                    return True
                chosen.pop()
        dead.add(masks)
        return False

    return chosen if rec(0, (0,) * (d - 1)) else None


def _positive_rows(A: Tensor) -> list[list[Index]]:
    rows: list[list[Index]] = [[] for _ in range(A.order)]
    for ix, v in A.nonzero():
        if v > 0:
            rows[ix[0]].append(ix[1:])
    return rows


def positive_diagonal(A: Tensor) -> Diagonal | None:
    """The first positive 1-diagonal of a non-negative tensor, or None."""
    if not A.is_nonnegative():
        raise ValueError("positive-diagonal test needs a non-negative tensor")
    if A.dim < 2:
        raise ValueError("diagonals need dim >= 2")
    cells = _first_positive(_positive_rows(A), A.order, A.dim)
    return Diagonal(1, cells) if cells is not None else None


def has_positive_diagonal(A: Tensor) -> bool:
    """True iff permanent1(A) > 0; only the support of A matters."""
    return positive_diagonal(A) is not None


def permanent_s(A: Tensor, s: int, cap: int | None = None) -> PermanentResult:
    """Sum over all s-diagonals of the product of their entries.

    An s-diagonal is an exact cover of the items ``(axes, values)``, one for
    each s-subset of axes and each value tuple on it, by nonzero cells (a
    cell covers its projection onto every s-subset).  Enumerated with
    Algorithm X under a node cap (default 1e8).
    """
    d, n = A.dim, A.order
    if not 1 <= s <= d - 1:
        raise ValueError(f"s must lie in 1..{d - 1}, got {s}")
    budget = Budget(f"{s}-permanent enumeration", resolve_cap(cap, 10**8))
    subsets = list(itertools.combinations(range(d), s))
    items = [(axes, vals) for axes in subsets for vals in itertools.product(range(n), repeat=s)]
    entries = dict(A.nonzero())
    options = {ix: [(axes, tuple(ix[a] for a in axes)) for axes in subsets] for ix in entries}
    val = Fraction(0)
    cnt = 0
    witness = None
    for cover in exact_covers(items, options, budget):
        p = Fraction(1)
        for ix in cover:
            p *= entries[ix]
        val += p
        if all(entries[ix] > 0 for ix in cover):
            cnt += 1
            if witness is None:
                witness = Diagonal(s, sorted(cover))
    return PermanentResult(val, cnt, witness)


# ---------------------------------------------------------------------------
# Latin hypercube views


def count_transversals(H: LatinHypercube, enumerate: bool = False
                       ) -> tuple[int, list[Diagonal] | None]:
    """Number of transversals of H, optionally with the full list."""
    P = p_of_h(H)
    res = permanent1(P)
    assert res.value == res.diagonal_count
    found = None
    if enumerate:
        found = [Diagonal(1, cells) for cells in iter_positive_diagonals(P)]
    return res.diagonal_count, found


def mixed_transversal_exists(Hs: Sequence[LatinHypercube]) -> Diagonal | None:
    """A transversal drawing each cell from some member of ``Hs``, or None.

    Same as a positive diagonal of the support of the summed permutation matrices.
    """
    if not Hs:
        raise ValueError("need at least one hypercube")
    first = Hs[0]
    for H in Hs[1:]:
        if H.dim != first.dim or H.order != first.order:
            raise ValueError("mixed transversals need hypercubes of equal dim and order")
    A = linear_combination((1, p_of_h(H)) for H in dict.fromkeys(Hs))
    return positive_diagonal(A)


def transversal_violation(H: LatinHypercube, cells: Sequence[Sequence[int]]) -> str | None:
    """cells are (coords..., symbol) tuples of length H.dim + 1."""
    n = H.order
    if len(cells) != n:
        return f"a transversal has {n} cells, got {len(cells)}"
    for c in cells:
        if len(c) != H.dim + 1:
            return f"cell {tuple(c)} should have {H.dim + 1} entries"
        if H[c[:-1]] != c[-1]:
            return f"cell {tuple(c)} does not match H"
    for a in range(H.dim + 1):
        if len({c[a] for c in cells}) != n:
            return f"two cells share position {a}"
    return None


def delta_sum_check(H: LatinHypercube, T: Diagonal | Sequence[Cell]) -> int:
    """Sum of Delta over a transversal T of H, reduced mod n.

    The value is forced: 0 when n is odd or the matrix dimension k+1 is even,
    n/2 otherwise.  Written 1-based, each Delta shifts by the constant
    1 - k (mod n); over the n cells of a transversal that is n(1 - k) = 0,
    so the dichotomy is the same for 0-based indexing.
    """
    if isinstance(T, Diagonal):
        cells = [tuple(c) for c in T.cells]
    else:
        cells = [tuple(c.coords) + (c.symbol,) for c in T]
    why = transversal_violation(H, cells)
    if why:
        raise ValueError(f"not a transversal: {why}")
    n, d = H.order, H.dim + 1
    total = sum((c[-1] - sum(c[:-1])) % n for c in cells) % n
    expected = 0 if (n % 2 or d % 2 == 0) else n // 2
    if total != expected:
        raise ArithmeticError(f"Delta sum {total} contradicts the Delta parity identity (expected {expected})")
    return total
