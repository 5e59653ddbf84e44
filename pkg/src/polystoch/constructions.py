"""Zero-permanent families, the A_6 certificate, MOLS pairs and hull witnesses."""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import factorial
from typing import Sequence

import numpy as np

from .errors import CapExceeded, resolve_cap
from .latin import (
    LatinHypercube,
    completions,
    cyclic,
    interchange_hyperplanes,
    is_orthogonal,
    lab_square,
    lift,
    linear_hypercube,
    p_of_h,
    random_latin_hypercube,
)
from .permanent import permanent1
from .polytope import HullCertificate, transversal_cover
from .species import partition_species
from .tensor import (
    ConvexCombination,
    Tensor,
    as_fraction,
    linear_combination,
    polystochastic_violation,
    product,
    uniform,
)

log = logging.getLogger(__name__)

A6_SHA256 = "4b5c7e2db332d0b74b5256fc423e74358748ebf6ec6f9715778425a31d3f7853"
DEFAULT_EPSILONS = (Fraction(1, 100), Fraction(1, 50), Fraction(1, 20), Fraction(1, 10))


def maximal_r(n: int) -> int:
    """Largest r with r(r-1) < n."""
    r = 1
    while (r + 1) * r < n:
        r += 1
    return r


# ---------------------------------------------------------------------------
# zero-permanent families


@dataclass(frozen=True)
class ZeroFamilySpec:
    """Hypercubes equal to cyclic(d-1, n) outside r consecutive hyperplanes.

    The window is ``window_start, window_start+1, ... (mod n)`` along ``axis``;
    by default it is the last r hyperplanes and r is maximal.
    """

    d: int
    n: int
    r: int | None = None
    window_start: int | None = None
    axis: int = 0

    def __post_init__(self):
        if self.d < 3 or self.d % 2 == 0:
            raise ValueError(f"d must be odd and at least 3, got {self.d}")
        if self.n < 2 or self.n % 2:
            raise ValueError(f"n must be even, got {self.n}")
        r = maximal_r(self.n) if self.r is None else self.r
        if r < 1 or r * (r - 1) >= self.n:
            raise ValueError(f"window length r={r} needs r(r-1) < n={self.n}")
        object.__setattr__(self, "r", r)
        if self.window_start is None:
            object.__setattr__(self, "window_start", self.n - r)
        if not 0 <= self.axis < self.d - 1:
            raise ValueError(f"axis must lie in 0..{self.d - 2}, got {self.axis}")

    @property
    def window(self) -> list[int]:
        return [(self.window_start + t) % self.n for t in range(self.r)]

    def partial(self) -> np.ndarray:
        arr = cyclic(self.d - 1, self.n).array.copy()
        idx = [slice(None)] * (self.d - 1)
        idx[self.axis] = self.window
        arr[tuple(idx)] = -1
        return arr


def zero_family(spec: ZeroFamilySpec, mode: str = "enumerate", count: int = 20,
                seed: int = 0, cap: int | None = None) -> list[LatinHypercube]:
    """Members of the family: every completion (``enumerate``) or ``count`` random ones.

    Sampling draws independent randomised completions, so small families
    produce repeats.  Enumeration raises CapExceeded past ``cap`` nodes.
    """
    partial = spec.partial()
    if mode == "enumerate":
        return list(completions(partial, cap=cap))
    if mode == "sample":
        rng = random.Random(seed)
        return [next(completions(partial, rng=rng, limit=1, cap=cap)) for _ in range(count)]
    raise ValueError(f"mode must be 'enumerate' or 'sample', got {mode!r}")


def independent_zero_set(d: int, n: int) -> list[Tensor]:
    """Linearly independent permutation matrices whose hull, with P(cyclic), has zero permanent.

    For n > 6 these are the lifted squares L_{a,b}, 1 <= a <= (r-1)//2 and
    1 <= b <= n/2; for n in {4, 6} a single swap of two adjacent rows.
    """
    if n % 2 or n < 4:
        raise ValueError(f"n must be even and at least 4, got {n}")
    if d < 3 or d % 2 == 0:
        raise ValueError(f"d must be odd and at least 3, got {d}")
    if n <= 6:
        return [p_of_h(interchange_hyperplanes(cyclic(d - 1, n), 0, 0, 1))]
    r = maximal_r(n)
    return [p_of_h(lift(lab_square(n, a, b), d - 1))
            for a in range(1, (r - 1) // 2 + 1) for b in range(1, n // 2 + 1)]


def count_zero_species(n: int, d: int, cap: int | None = None) -> int:
    """Species among lifts of the squares equal to cyclic(2, n) outside the last r rows."""
    if n == 2:
        return 1
    spec = ZeroFamilySpec(d, n)
    family = zero_family(ZeroFamilySpec(3, n, spec.r), cap=cap)
    return len(partition_species([lift(L, d - 1) for L in family], cap))


# ---------------------------------------------------------------------------
# the order-6 matrix and its certificate


@lru_cache(maxsize=1)
def _a6_data() -> dict:
    raw = resources.files("polystoch").joinpath("data/a6.json").read_text()
    doc = json.loads(raw)
    body = {"layers": doc["layers"], "terms": doc["terms"]}
    digest = hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()
    if digest != A6_SHA256:
        raise RuntimeError(f"a6.json checksum mismatch: {digest}")
    return doc


def a6() -> Tensor:
    """The 6x6x6 matrix, first axis = layer."""
    layers = _a6_data()["layers"]
    return Tensor.from_array([[[as_fraction(x) for x in row] for row in layer] for layer in layers])


def a6_terms() -> ConvexCombination:
    """The eight members of Lambda_2(3, 6), weighted to recombine to a6() / 6."""
    terms = []
    for t in _a6_data()["terms"]:
        cells = [(layer, i - 1, j - 1) for layer, (i, j) in enumerate(t["cells"])]
        terms.append((Fraction(t["weight"]) / 6, Tensor.from_cells(3, 6, cells)))
    return ConvexCombination(tuple(terms))


def a6_certificate() -> HullCertificate:
    return HullCertificate(a6(), 2, a6_terms(), Fraction(1, 6))


# ---------------------------------------------------------------------------
# orthogonal Latin squares


def _gf2_mul(a: int, b: int, poly: int, m: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= poly
    return out


def _irreducible_gf2(m: int) -> int:
    """Least irreducible binary polynomial of degree m (bit i = coefficient of x^i)."""
    def mod(a, b):
        db = b.bit_length()
        while a.bit_length() >= db:
            a ^= b << (a.bit_length() - db)
        return a

    for poly in range(1 << m, 1 << (m + 1)):
        if all(mod(poly, q) for q in range(2, 1 << (m // 2 + 1))):
            return poly
    raise AssertionError("no irreducible polynomial")  # pragma: no cover


def _field_pair(m: int) -> tuple[LatinHypercube, LatinHypercube]:
    """x + y and g*x + y over GF(2^m), g the class of the indeterminate."""
    q, poly = 1 << m, _irreducible_gf2(m)
    g = 2
    L1 = [[x ^ y for y in range(q)] for x in range(q)]
    L2 = [[_gf2_mul(g, x, poly, m) ^ y for y in range(q)] for x in range(q)]
    return LatinHypercube.from_array(L1), LatinHypercube.from_array(L2)


def _direct_product(A: LatinHypercube, B: LatinHypercube) -> LatinHypercube:
    nb = B.order
    arr = A.array[:, None, :, None] * nb + B.array[None, :, None, :]
    n = A.order * nb
    return LatinHypercube.from_array(arr.reshape(n, n))


def _search_pair(n: int, cap: int | None) -> tuple[LatinHypercube, LatinHypercube]:
    """Seeded random squares, tried in turn until one has an orthogonal mate."""
    for seed in itertools.count():
        L = random_latin_hypercube(2, n, random.Random(seed))
        try:
            cover = transversal_cover(p_of_h(L), cap=cap if cap is not None else 10**6)
        except CapExceeded:
            continue
        if cover is not None:
            return L, cover.mate
    raise AssertionError("unreachable")  # pragma: no cover


def mols_pair(n: int, cap: int | None = None) -> tuple[LatinHypercube, LatinHypercube]:
    """Two orthogonal Latin squares of order n (n > 2, n != 6)."""
    if n in (2, 6) or n < 2:
        hint = " (use a6() for order 6)" if n == 6 else ""
        raise ValueError(f"no orthogonal pair of order {n}{hint}")
    if n % 2:
        pair = linear_hypercube(2, n, 0, (1, 1)), linear_hypercube(2, n, 0, (2, 1))
    elif n & (n - 1) == 0:
        pair = _field_pair(n.bit_length() - 1)
    elif n % 4 == 0:
        two = n & -n
        A1, A2 = mols_pair(two)
        B1, B2 = mols_pair(n // two)
        pair = _direct_product(A1, B1), _direct_product(A2, B2)
    else:
        pair = _search_pair(n, cap)
    assert is_orthogonal(*pair)
    return pair


# ---------------------------------------------------------------------------
# hull witnesses


def _base_certificate(n: int, cap: int | None) -> HullCertificate:
    if n == 6:
        return a6_certificate()
    P = p_of_h(mols_pair(n)[0])
    cover = transversal_cover(P, cap)
    if cover is None:  # pragma: no cover - the first square of a pair always has a mate
        raise AssertionError("square from an orthogonal pair has no transversal cover")
    w = Fraction(1, n)
    return HullCertificate(P, 2, ConvexCombination(tuple((w, Q) for Q in cover.parts)), w)


def _step(cert: HullCertificate, base: HullCertificate) -> HullCertificate:
    merged: dict[Tensor, Fraction] = {}
    for c, P in cert.terms.terms:
        for w, Q in base.terms.terms:
            T = product(P, Q)
            merged[T] = merged.get(T, Fraction(0)) + c * w
    return HullCertificate(product(cert.target, base.target), cert.s + 1,
                           ConvexCombination(tuple((w, T) for T, w in merged.items())),
                           cert.scale * base.scale)


def hull_witness(d: int, n: int, cap: int | None = None) -> HullCertificate:
    """A in Omega_1(d, n), A != uniform, with n^(2-d) A a convex combination of Lambda_{d-1}.

    Built from a 3-dimensional base certificate B by repeated products
    A -> A x B; each step raises the dimension by one and multiplies the
    term counts (identical product terms are merged).  ``cap`` bounds the
    number of stored entries, terms times n^d (default 1e7).
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"d must be odd and at least 3, got {d}")
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    limit = resolve_cap(cap, 10**7)
    base = _base_certificate(n, cap)
    cert = base
    for dim in range(4, d + 1):
        if len(cert.terms) * len(base.terms) * n**dim > limit:
            raise CapExceeded("hull witness construction", limit)
        cert = _step(cert, base)
    log.debug("hull witness d=%d n=%d: %d terms", d, n, len(cert.terms))
    return cert


# ---------------------------------------------------------------------------
# perturbation scans


@dataclass(frozen=True)
class ScanResult:
    epsilons: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    baseline: Fraction

    def signs(self) -> list[int]:
        """-1, 0 or 1 for each value compared with the baseline."""
        return [(v > self.baseline) - (v < self.baseline) for v in self.values]


def uniform_permanent(d: int, n: int) -> Fraction:
    """(n!)^(d-1) / n^n."""
    return Fraction(factorial(n) ** (d - 1), n**n)


def perturbation_scan(V: Tensor, epsilons: Sequence = DEFAULT_EPSILONS,
                      workers: int | None = None) -> ScanResult:
    """Permanents of (1 - eps) U + eps V for the uniform U of V's shape."""
    why = polystochastic_violation(V, 1)
    if why:
        raise ValueError(f"V is not 1-polystochastic: {why}")
    eps = tuple(as_fraction(e) for e in epsilons)
    for e in eps:
        if not 0 <= e <= 1:
            raise ValueError(f"epsilon {e} outside [0, 1]")
    U = uniform(V.dim, V.order)
    values = tuple(permanent1(linear_combination([(1 - e, U), (e, V)]), workers).value
                   for e in eps)
    return ScanResult(eps, values, uniform_permanent(V.dim, V.order))
