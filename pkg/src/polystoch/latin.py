"""Latin hypercubes, their permutation matrices, and the cyclic constructions.

A Latin hypercube of dimension k and order n is stored row-major over
``{0..n-1}^k`` with symbols in ``{0..n-1}``.  All indexing is 0-based; the
cyclic cube is ``H(x) = (x_1 + ... + x_k) mod n``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .errors import Budget, resolve_cap
from .tensor import Tensor, permutation_violation

SYMBOL_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def latin_violation(arr: np.ndarray) -> str | None:
    n = arr.shape[0]
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        return f"symbols must lie in 0..{n - 1}"
    want = np.arange(n)
    for axis in range(arr.ndim):
        s = np.sort(arr, axis=axis)
        shape = [1] * arr.ndim
        shape[axis] = n
        bad = np.argwhere(s != want.reshape(shape))
        if len(bad):
            ix = list(bad[0])
            ix[axis] = "*"
            return f"line along axis {axis} at {tuple(ix)} repeats a symbol"
    return None


@dataclass(frozen=True)
class LatinHypercube:
    dim: int
    order: int
    symbols: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if self.dim < 1 or self.order < 1:
            raise ValueError(f"need dim >= 1 and order >= 1, got {self.dim}, {self.order}")
        if len(symbols) != self.order**self.dim:
            raise ValueError(f"expected {self.order ** self.dim} symbols, got {len(symbols)}")
        why = latin_violation(self.array)
        if why:
            raise ValueError(f"not a Latin hypercube: {why}")

    @classmethod
    def from_array(cls, arr) -> LatinHypercube:
        arr = np.asarray(arr, dtype=np.int64)
        if len(set(arr.shape)) != 1:
            raise ValueError(f"array must be cubical, got shape {arr.shape}")
        return cls(arr.ndim, arr.shape[0], arr.ravel().tolist())

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.symbols, dtype=np.int64).reshape((self.order,) * self.dim)
        a.setflags(write=False)
        return a

    def __getitem__(self, coords: Sequence[int]) -> int:
        return int(self.array[tuple(coords)])

    def cells(self) -> Iterator[Cell]:
        for coords, s in zip(itertools.product(range(self.order), repeat=self.dim), self.symbols):
            yield Cell(coords, s)

    def rows(self) -> list[list[int]]:
        return self.array.reshape(-1, self.order).tolist()

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {"kind": "latin", "dim": self.dim, "order": self.order,
                "entries": list(self.symbols)}

    @classmethod
    def from_json(cls, obj: dict) -> LatinHypercube:
        return cls(int(obj["dim"]), int(obj["order"]), obj["entries"])

    def to_text(self) -> str:
        n, k = self.order, self.dim
        if n > len(SYMBOL_CHARS):
            raise ValueError(f"text format supports order <= {len(SYMBOL_CHARS)}")
        rows = [" ".join(SYMBOL_CHARS[s] for s in r) for r in self.rows()]
        if k <= 2:
            return "\n".join(rows) + "\n"
        out = []
        for i, r in enumerate(rows):
            if i:
                # a boundary along axis a (a <= k-3) gets k-2-a blank lines
                depth, q = 0, i
                while q % n == 0 and depth < k - 2:
                    q //= n
                    depth += 1
                out.extend([""] * depth)
            out.append(r)
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> LatinHypercube:
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split() if " " in line else list(line)
            rows.append([SYMBOL_CHARS.index(t.lower()) if not t.isdigit() else int(t)
                         for t in toks])
        if not rows:
            raise ValueError("empty Latin hypercube text")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged rows")
        k, m = 1, len(rows)
        while m > 1:
            if m % n:
                raise ValueError(f"{len(rows)} rows is not a power of the order {n}")
            m //= n
            k += 1
        return cls(k, n, [s for r in rows for s in r])


@dataclass(frozen=True)
class Cell:
    coords: tuple[int, ...]
    symbol: int


# ---------------------------------------------------------------------------
# permutation matrices


def p_of_h(H: LatinHypercube) -> Tensor:
    """The permutation matrix with P(x, H(x)) = 1."""
    return Tensor.from_cells(H.dim + 1, H.order,
                             (c.coords + (c.symbol,) for c in H.cells()))


def h_of_p(P: Tensor) -> LatinHypercube:
    if P.dim < 2:
        raise ValueError("a 1-permutation matrix has dimension at least 2")
    why = permutation_violation(P, 1)
    if why:
        raise ValueError(f"not a 1-permutation matrix: {why}")
    sym = np.argmax(np.asarray(P.array != 0), axis=P.dim - 1)
    return LatinHypercube.from_array(sym)


# ---------------------------------------------------------------------------
# constructions


def linear_hypercube(k: int, n: int, s: int, coeffs: Sequence[int]) -> LatinHypercube:
    """H(x) = s + sum_i c_i x_i (mod n)."""
    if len(coeffs) != k:
        raise ValueError(f"need {k} coefficients, got {len(coeffs)}")
    for i, c in enumerate(coeffs):
        if gcd(c, n) != 1:
            raise ValueError(f"coefficient {i} ({c}) is not coprime to n={n}")
    grids = np.indices((n,) * k)
    arr = (s + sum(c * g for c, g in zip(coeffs, grids))) % n
    return LatinHypercube.from_array(arr)


def cyclic(k: int, n: int) -> LatinHypercube:
    return linear_hypercube(k, n, 0, [1] * k)


def detect_linear(H: LatinHypercube) -> tuple[int, tuple[int, ...]] | None:
    """The (shift, coefficients) of a linear hypercube, or None."""
    k, n = H.dim, H.order
    origin = (0,) * k
    s = H[origin]
    coeffs = []
    for a in range(k):
        step = list(origin)
        step[a] = 1 if n > 1 else 0
        coeffs.append((H[step] - s) % n)
    grids = np.indices((n,) * k)
    if np.array_equal(H.array, (s + sum(c * g for c, g in zip(coeffs, grids))) % n):
        return s, tuple(coeffs)
    return None


def delta(H: LatinHypercube, c: Cell) -> int:
    """(symbol - sum of coordinates) mod n; zero wherever H agrees with the cyclic cube."""
    if H[c.coords] != c.symbol:
        raise ValueError(f"cell {c} is not a cell of H")
    return (c.symbol - sum(c.coords)) % H.order


def lift(L: LatinHypercube, k: int) -> LatinHypercube:
    """H(x_1..x_k) = L(x_1, x_2) + x_3 + ... + x_k (mod n)."""
    if L.dim != 2:
        raise ValueError("lift expects a Latin square")
    if k < 2:
        raise ValueError("k must be at least 2")
    n = L.order
    grids = np.indices((n,) * k)
    arr = L.array[grids[0], grids[1]] + sum(grids[2:], np.zeros((n,) * k, dtype=np.int64))
    return LatinHypercube.from_array(arr % n)


def row_cycle(L: LatinHypercube, r1: int, r2: int, start_col: int) -> list[int]:
    """Columns of the row-cycle between rows r1 and r2 through column start_col."""
    if L.dim != 2:
        raise ValueError("row cycles are defined for Latin squares")
    if r1 == r2:
        raise ValueError("row cycle needs two distinct rows")
    a = L.array
    where_r1 = {int(v): j for j, v in enumerate(a[r1])}
    cols = [start_col]
    c = where_r1[int(a[r2, start_col])]
    while c != start_col:
        cols.append(c)
        c = where_r1[int(a[r2, c])]
    return cols


def switch_row_cycle(L: LatinHypercube, r1: int, r2: int, start_col: int) -> LatinHypercube:
    """Interchange rows r1 and r2 on the row-cycle through (r1, start_col)."""
    cols = row_cycle(L, r1, r2, start_col)
    a = L.array.copy()
    a[r1, cols], a[r2, cols] = L.array[r2, cols], L.array[r1, cols]
    return LatinHypercube.from_array(a)


def interchange_hyperplanes(H: LatinHypercube, axis: int, i: int, j: int) -> LatinHypercube:
    """Swap hyperplanes i and j along ``axis``; ``axis == H.dim`` swaps symbols i and j."""
    k, n = H.dim, H.order
    if not 0 <= axis <= k:
        raise ValueError(f"axis must lie in 0..{k}, got {axis}")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"hyperplane indices {i}, {j} out of range for order {n}")
    a = H.array.copy()
    if axis == k:
        a = np.where(H.array == i, j, np.where(H.array == j, i, H.array))
    else:
        idx = [slice(None)] * k
        idx_i, idx_j = list(idx), list(idx)
        idx_i[axis], idx_j[axis] = i, j
        a[tuple(idx_i)], a[tuple(idx_j)] = H.array[tuple(idx_j)], H.array[tuple(idx_i)]
    return LatinHypercube.from_array(a)


def lab_square(n: int, a: int, b: int) -> LatinHypercube:
    """The square L_{a,b}: cyclic(2, n) altered only in rows 2a-2, 2a-1, 2a.

    First the n/2-cycle between rows 2a-2 and 2a through column 2b-2 is
    switched; that leaves an intercalate in rows 2a-2, 2a-1 on columns
    2b-2, 2b-1, which is switched next.  Net effect on row 2a-1: the symbols
    in columns 2b-2 and 2b-1 trade places, nothing else in that row moves.
    """
    if n % 2 or n < 4:
        raise ValueError("L_{a,b} needs even n >= 4")
    if not (1 <= a and 2 * a < n and 1 <= b <= n // 2):
        raise ValueError(f"(a, b) = ({a}, {b}) out of range for n={n}")
    r1, mid, r3 = 2 * a - 2, 2 * a - 1, 2 * a
    c0 = 2 * b - 2
    L = switch_row_cycle(cyclic(2, n), r1, r3, c0)
    return switch_row_cycle(L, r1, mid, c0)


# ---------------------------------------------------------------------------
# completion and enumeration


def completions(partial: np.ndarray, *, rng: random.Random | None = None,
                limit: int | None = None, cap: int | None = None) -> Iterator[LatinHypercube]:
    """Latin hypercubes extending ``partial`` (entries < 0 are blank).

    Cells are filled in row-major order.  With ``rng`` the candidate symbols
    are tried in random order; otherwise ascending, so enumeration order is
    lexicographic.  Stops after ``limit`` results.
    """
    partial = np.asarray(partial, dtype=np.int64)
    n, k = partial.shape[0], partial.ndim
    budget = Budget("Latin completion", resolve_cap(cap, 10**7))
    full = (1 << n) - 1
    # used[a][line] = bitmask of symbols on the line along axis a
    used = [dict() for _ in range(k)]

    def key(ix, a):
        return ix[:a] + ix[a + 1:]

    blanks = []
    for ix in itertools.product(range(n), repeat=k):
        v = int(partial[ix])
        if v < 0:
            blanks.append(ix)
            continue
        for a in range(k):
            kk = key(ix, a)
            m = used[a].get(kk, 0)
            if m >> v & 1:
                raise ValueError(f"partial hypercube repeats symbol {v} on a line at {ix}")
            used[a][kk] = m | 1 << v

    arr = partial.copy()
    found = 0

    def rec(pos):
        nonlocal found
        if pos == len(blanks):
            found += 1
            yield LatinHypercube.from_array(arr)
            return
        budget.tick()
        ix = blanks[pos]
        keys = [key(ix, a) for a in range(k)]
        taken = 0
        for a in range(k):
            taken |= used[a].get(keys[a], 0)
        free = full & ~taken
        cands = [v for v in range(n) if free >> v & 1]
        if rng is not None:
            rng.shuffle(cands)
        for v in cands:
            bit = 1 << v
            for a in range(k):
                used[a][keys[a]] = used[a].get(keys[a], 0) | bit
            arr[ix] = v
            yield from rec(pos + 1)
            for a in range(k):
                used[a][keys[a]] &= ~bit
            arr[ix] = -1
            if limit is not None and found >= limit:
                return

    yield from rec(0)


def all_latin_hypercubes(k: int, n: int, cap: int | None = None) -> Iterator[LatinHypercube]:
    return completions(np.full((n,) * k, -1), cap=cap)


def random_latin_hypercube(k: int, n: int, rng: random.Random) -> LatinHypercube:
    """A random Latin hypercube: shuffled backtracking, then random isotopy.

    Not uniformly distributed; adequate for property tests.
    """
    H = next(completions(np.full((n,) * k, -1), rng=rng, limit=1))
    perms = [rng.sample(range(n), n) for _ in range(k + 1)]
    a = H.array
    for axis in range(k):
        a = np.take(a, perms[axis], axis=axis)
    return LatinHypercube.from_array(np.asarray(perms[k])[a])


def is_orthogonal(L1: LatinHypercube, L2: LatinHypercube) -> bool:
    """Every ordered symbol pair occurs exactly once when the squares are superimposed."""
    if L1.dim != 2 or L2.dim != 2 or L1.order != L2.order:
        raise ValueError("orthogonality is checked for Latin squares of equal order")
    pairs = set(zip(L1.symbols, L2.symbols))
    return len(pairs) == L1.order**2
