"""Dense exact-rational d-dimensional matrices of order n.

Entries are :class:`fractions.Fraction` values stored row-major (axis 0
slowest).  Nothing in this module ever rounds.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, lcm
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

log = logging.getLogger(__name__)

Index = tuple[int, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # only dyadic literals such as 0.5 are accepted; anything else is lossy
        f = Fraction(x)
        if f.limit_denominator(10**6) != f:
            raise ValueError(f"refusing inexact float entry {x!r}")
        return f
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Tensor:
    """A d-dimensional matrix of order n with exact rational entries."""

    dim: int
    order: int
    entries: tuple[Fraction, ...] = field(repr=False)

    def __post_init__(self):
        if self.dim < 1 or self.order < 1:
            raise ValueError(f"need dim >= 1 and order >= 1, got {self.dim}, {self.order}")
        entries = tuple(as_fraction(e) for e in self.entries)
        if len(entries) != self.order**self.dim:
            raise ValueError(
                f"expected {self.order ** self.dim} entries for dim={self.dim}, "
                f"order={self.order}; got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    # -- construction ------------------------------------------------------

    @classmethod
    def zeros(cls, dim: int, order: int) -> Tensor:
        return cls(dim, order, (Fraction(0),) * order**dim)

    @classmethod
    def from_function(cls, dim: int, order: int, f: Callable[[Index], object]) -> Tensor:
        return cls(dim, order, [f(ix) for ix in itertools.product(range(order), repeat=dim)])

    @classmethod
    def from_cells(cls, dim: int, order: int, cells: Iterable[Sequence[int]], value=1) -> Tensor:
        """Tensor with ``value`` on each listed cell and zero elsewhere."""
        entries = [Fraction(0)] * order**dim
        v = as_fraction(value)
        for c in cells:
            entries[_offset(c, order)] = v
        return cls(dim, order, entries)

    @classmethod
    def from_array(cls, arr) -> Tensor:
        arr = np.asarray(arr, dtype=object)
        if arr.ndim == 0 or len(set(arr.shape)) != 1:
            raise ValueError(f"array must be cubical, got shape {arr.shape}")
        return cls(arr.ndim, arr.shape[0], list(arr.flat))

    # -- access ------------------------------------------------------------

    @cached_property
    def array(self) -> np.ndarray:
        """Read-only object-dtype view with shape ``(n,) * d``."""
        a = np.empty(len(self.entries), dtype=object)
        a[:] = self.entries
        a = a.reshape((self.order,) * self.dim)
        a.setflags(write=False)
        return a

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.order,) * self.dim

    def __getitem__(self, ix: Sequence[int]) -> Fraction:
        self._check_index(ix)
        return self.entries[_offset(ix, self.order)]

    def _check_index(self, ix: Sequence[int]) -> None:
        if len(ix) != self.dim or any(not 0 <= c < self.order for c in ix):
            raise IndexError(f"index {tuple(ix)} invalid for dim={self.dim}, order={self.order}")

    def indices(self) -> Iterator[Index]:
        return itertools.product(range(self.order), repeat=self.dim)

    def nonzero(self) -> list[tuple[Index, Fraction]]:
        return [(ix, v) for ix, v in zip(self.indices(), self.entries) if v != 0]

    def support(self) -> list[Index]:
        return [ix for ix, v in zip(self.indices(), self.entries) if v != 0]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.entries)

    def is_zero_one(self) -> bool:
        return all(v == 0 or v == 1 for v in self.entries)

    def same_shape(self, other: Tensor) -> bool:
        return self.dim == other.dim and self.order == other.order

    # -- arithmetic --------------------------------------------------------

    def _require_same_shape(self, other: Tensor) -> None:
        if not self.same_shape(other):
            raise ValueError(
                f"shape mismatch: ({self.dim},{self.order}) vs ({other.dim},{other.order})"
            )

    def __add__(self, other: Tensor) -> Tensor:
        self._require_same_shape(other)
        return Tensor(self.dim, self.order, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: Tensor) -> Tensor:
        self._require_same_shape(other)
        return Tensor(self.dim, self.order, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> Tensor:
        return Tensor(self.dim, self.order, [-a for a in self.entries])

    def __mul__(self, c) -> Tensor:
        if isinstance(c, Tensor):
            return NotImplemented
        c = as_fraction(c)
        return Tensor(self.dim, self.order, [c * a for a in self.entries])

    __rmul__ = __mul__

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "order": self.order,
            "entries": [format_fraction(v) if v.denominator != 1 else v.numerator
                        for v in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> Tensor:
        try:
            return cls(int(obj["dim"]), int(obj["order"]), obj["entries"])
        except KeyError as e:
            raise ValueError(f"tensor JSON missing field {e}") from None


def _offset(ix: Sequence[int], n: int) -> int:
    off = 0
    for c in ix:
        off = off * n + c
    return off


# ---------------------------------------------------------------------------
# planes


@dataclass(frozen=True)
class PlaneSpec:
    """A k-plane: ``free_axes`` range over all values, the other axes are pinned.

    ``fixed_values`` lists the pinned value of each non-free axis in increasing
    axis order.
    """

    free_axes: tuple[int, ...]
    fixed_values: tuple[int, ...]

    def fixed_axes(self, dim: int) -> tuple[int, ...]:
        free = set(self.free_axes)
        return tuple(a for a in range(dim) if a not in free)

    def validate(self, dim: int, order: int) -> None:
        free = self.free_axes
        if len(set(free)) != len(free) or any(not 0 <= a < dim for a in free):
            raise ValueError(f"free axes {free} invalid for dim {dim}")
        if len(self.fixed_values) != dim - len(free):
            raise ValueError("free and fixed axes must partition the axes")
        if any(not 0 <= v < order for v in self.fixed_values):
            raise ValueError(f"fixed values {self.fixed_values} out of range for order {order}")

    def slicer(self, dim: int) -> tuple:
        vals = iter(self.fixed_values)
        free = set(self.free_axes)
        return tuple(slice(None) if a in free else next(vals) for a in range(dim))


def iter_planes(dim: int, order: int, k: int) -> Iterator[PlaneSpec]:
    for free in itertools.combinations(range(dim), k):
        for fixed in itertools.product(range(order), repeat=dim - k):
            yield PlaneSpec(free, fixed)


def plane_sum(A: Tensor, p: PlaneSpec) -> Fraction:
    p.validate(A.dim, A.order)
    return Fraction(np.sum(A.array[p.slicer(A.dim)]))


def plane_sums(A: Tensor, k: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """For every choice of k free axes, the array of all k-plane sums.

    The yielded array is indexed by the values of the remaining axes.
    """
    for free in itertools.combinations(range(A.dim), k):
        yield free, np.asarray(np.sum(A.array, axis=free), dtype=object)


def _check_s(A: Tensor, s: int) -> None:
    if not 1 <= s <= A.dim - 1:
        raise ValueError(f"s must lie in 1..{A.dim - 1} for a {A.dim}-dimensional matrix, got {s}")


def polystochastic_violation(A: Tensor, s: int) -> str | None:
    """First reason A is not s-polystochastic, or None if it is."""
    _check_s(A, s)
    for ix, v in zip(A.indices(), A.entries):
        if v < 0:
            return f"negative entry {format_fraction(v)} at {ix}"
    for free, sums in plane_sums(A, s):
        for fixed, total in np.ndenumerate(sums):
            if total != 1:
                return (f"{s}-plane with free axes {free} at fixed values {fixed} "
                        f"sums to {format_fraction(Fraction(total))}")
    return None


def is_polystochastic(A: Tensor, s: int) -> bool:
    why = polystochastic_violation(A, s)
    if why is not None:
        log.debug("not %d-polystochastic: %s", s, why)
    return why is None


def permutation_violation(A: Tensor, s: int) -> str | None:
    _check_s(A, s)
    for ix, v in zip(A.indices(), A.entries):
        if v != 0 and v != 1:
            return f"entry {format_fraction(v)} at {ix} is not 0 or 1"
    for free, sums in plane_sums(A, s):
        for fixed, total in np.ndenumerate(sums):
            if total != 1:
                return f"{s}-plane with free axes {free} at fixed values {fixed} holds {total} ones"
    return None


def is_permutation_matrix(A: Tensor, s: int) -> bool:
    """True iff A is a (0,1)-matrix with exactly one 1 in every s-plane."""
    why = permutation_violation(A, s)
    if why is not None:
        log.debug("not an %d-permutation matrix: %s", s, why)
    return why is None


def planes_scaled(A: Tensor, r: int) -> Fraction | None:
    """The common value of all r-plane sums of A, or None if they differ."""
    _check_s(A, r)
    common = None
    for _, sums in plane_sums(A, r):
        for total in sums.flat:
            if common is None:
                common = Fraction(total)
            elif total != common:
                return None
    return common


def count_planes(dim: int, order: int, k: int) -> int:
    return comb(dim, k) * order ** (dim - k)


# ---------------------------------------------------------------------------
# constructors and algebra


def uniform(d: int, n: int) -> Tensor:
    """n^-1 J: every entry 1/n."""
    return Tensor(d, n, (Fraction(1, n),) * n**d)


def ones(d: int, n: int) -> Tensor:
    return Tensor(d, n, (Fraction(1),) * n**d)


def identity_matrix(n: int) -> Tensor:
    return Tensor.from_cells(2, n, [(i, i) for i in range(n)])


def product(A: Tensor, B: Tensor) -> Tensor:
    """Contract the last axis of A with the first axis of B.

    ``(A x B)[i_1..i_{p-1}, i_p..i_{p+q-2}] = sum_j A[i_1..i_{p-1}, j] B[j, i_p..]``
    """
    if A.order != B.order:
        raise ValueError(f"order mismatch: {A.order} vs {B.order}")
    if A.dim < 2 or B.dim < 2:
        raise ValueError(f"both factors need dim >= 2, got {A.dim} and {B.dim}")
    c = np.tensordot(A.array, B.array, axes=([A.dim - 1], [0]))
    return Tensor(A.dim + B.dim - 2, A.order, list(np.asarray(c, dtype=object).flat))


@dataclass(frozen=True)
class ConvexCombination:
    """Positive rational weights summing to exactly 1, over same-shape tensors."""

    terms: tuple[tuple[Fraction, Tensor], ...]

    def __post_init__(self):
        terms = tuple((as_fraction(w), t) for w, t in self.terms)
        if not terms:
            raise ValueError("a convex combination needs at least one term")
        for w, _ in terms:
            if w <= 0:
                raise ValueError(f"weight {format_fraction(w)} is not positive")
        total = sum(w for w, _ in terms)
        if total != 1:
            raise ValueError(f"weights sum to {format_fraction(total)}, not 1")
        first = terms[0][1]
        for _, t in terms[1:]:
            if not t.same_shape(first):
                raise ValueError("all tensors in a convex combination must share dim and order")
        object.__setattr__(self, "terms", terms)

    @property
    def weights(self) -> list[Fraction]:
        return [w for w, _ in self.terms]

    @property
    def tensors(self) -> list[Tensor]:
        return [t for _, t in self.terms]

    def __len__(self) -> int:
        return len(self.terms)


def linear_combination(terms: Iterable[tuple[object, Tensor]]) -> Tensor:
    terms = list(terms)
    if not terms:
        raise ValueError("empty combination")
    first = terms[0][1]
    acc = [Fraction(0)] * len(first.entries)
    for w, t in terms:
        first._require_same_shape(t)
        w = as_fraction(w)
        if w == 0:
            continue
        for i, v in enumerate(t.entries):
            if v:
                acc[i] += w * v
    return Tensor(first.dim, first.order, acc)


def combine(c: ConvexCombination) -> Tensor:
    """Exact weighted sum of the terms."""
    return linear_combination(c.terms)


def average(tensors: Sequence[Tensor]) -> Tensor:
    w = Fraction(1, len(tensors))
    return combine(ConvexCombination(tuple((w, t) for t in tensors)))


def common_denominator(A: Tensor) -> int:
    return lcm(*(v.denominator for v in A.entries))


def total(A: Tensor) -> Fraction:
    return sum(A.entries, Fraction(0))


def nnz(A: Tensor) -> int:
    return sum(1 for v in A.entries if v)
