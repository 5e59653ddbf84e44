"""Species (orbits under S_n wr S_d) of Latin hypercubes and 1-permutation matrices.

A Latin hypercube of dimension k is viewed as the support of its permutation
matrix: a set of (k+1)-tuples.  The group permutes the k+1 positions and,
independently, the values in each position.  The canonical form is the
lexicographically least row-major symbol array in the orbit.

For a fixed arrangement of positions the minimisation is forced almost
everywhere.  The first line (varying the last axis from the origin) holds n
distinct symbols, so the optimum reads 0, 1, ..., n-1 there; this fixes the
symbol relabelling once the origin and the order on the last axis are
chosen.  The first cell of the hyperplane x_a = 1 (all other image
coordinates 0) is then minimised by a unique preimage, and likewise for
x_a = 2, ..., so each other axis is ordered by the relabelled symbols on the
line through the origin.  Only the origin (n^k choices) and the order of the
last axis ((n-1)! choices) are branched on.
"""

from __future__ import annotations

import itertools
from math import factorial
from typing import Sequence

import numpy as np

from .errors import Budget, CapExceeded, resolve_cap
from .latin import LatinHypercube, h_of_p
from .tensor import Tensor

DEFAULT_CAP = 10**7


def support_tuples(H: LatinHypercube) -> np.ndarray:
    """Array of shape (n^k, k+1): coordinates followed by the symbol."""
    k, n = H.dim, H.order
    coords = np.indices((n,) * k).reshape(k, -1).T
    return np.column_stack([coords, H.array.reshape(-1)])


def from_support(tuples: np.ndarray, n: int) -> LatinHypercube:
    k = tuples.shape[1] - 1
    arr = np.full((n,) * k, -1, dtype=np.int64)
    arr[tuple(tuples[:, :k].T)] = tuples[:, k]
    return LatinHypercube.from_array(arr)


def transform(H: LatinHypercube, axis_perm: Sequence[int],
              value_perms: Sequence[Sequence[int]]) -> LatinHypercube:
    """Apply a group element: new position b reads old position axis_perm[b], relabelled."""
    t = support_tuples(H)
    out = np.column_stack([np.asarray(value_perms[b])[t[:, axis_perm[b]]]
                           for b in range(H.dim + 1)])
    return from_support(out, H.order)


def _isotopy_min(h: np.ndarray, n: int, budget: Budget, chunk: int = 1 << 21) -> bytes:
    """Least row-major array over value relabellings of each axis (positions fixed)."""
    k = h.ndim
    flat = h.reshape(-1)
    weights = n ** np.arange(k - 1, -1, -1)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    by_first = [perms[perms[:, 0] == v] for v in range(n)]
    origins = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64)
    per_origin = len(by_first[0])
    step = max(1, chunk // (per_origin * n**k))
    best = None
    ar = np.arange(n)
    for lo in range(0, len(origins), step):
        O = origins[lo:lo + step]
        budget.tick(len(O) * per_origin)
        # one candidate per (origin, order of the last axis starting at the origin)
        cand_o = np.repeat(O, per_origin, axis=0)
        tau_last = np.concatenate([by_first[o] for o in O[:, -1]])
        C = len(cand_o)
        base = (cand_o * weights).sum(axis=1)
        line_base = base - cand_o[:, -1] * weights[-1]
        line = flat[line_base[:, None] + ar[None, :] * weights[-1]]
        relabel = np.empty((C, n), dtype=np.int64)
        np.put_along_axis(relabel, np.take_along_axis(line, tau_last, axis=1),
                          np.broadcast_to(ar, (C, n)), axis=1)
        taus = []
        for a in range(k - 1):
            lb = base - cand_o[:, a] * weights[a]
            vals = flat[lb[:, None] + ar[None, :] * weights[a]]
            taus.append(np.argsort(np.take_along_axis(relabel, vals, axis=1), axis=1))
        taus.append(tau_last)
        idx = np.zeros((C,) + (n,) * k, dtype=np.int64)
        for a, t in enumerate(taus):
            shape = [C] + [1] * k
            shape[a + 1] = n
            idx += (t * weights[a]).reshape(shape)
        img = np.take_along_axis(relabel, flat[idx.reshape(C, -1)], axis=1).astype(np.uint8)
        row = min(map(bytes, img))
        if best is None or row < best:
            best = row
    return best


def _as_hypercube(X) -> LatinHypercube:
    if isinstance(X, LatinHypercube):
        return X
    if isinstance(X, Tensor):
        return h_of_p(X)
    raise TypeError(f"expected a LatinHypercube or a 1-permutation Tensor, got {type(X).__name__}")


def canonical_form(X, cap: int | None = None) -> LatinHypercube:
    """Least symbol array in the species of X (a Latin hypercube or Lambda_1 matrix).

    Raises CapExceeded when more than ``cap`` candidate labellings would be
    examined (default 1e7, or $POLYSTOCH_CAP).
    """
    H = _as_hypercube(X)
    k, n = H.dim, H.order
    budget = Budget("species canonical form", resolve_cap(cap, DEFAULT_CAP))
    need = factorial(k + 1) * n**k * factorial(n - 1)
    if need > budget.cap:
        raise CapExceeded(budget.what, budget.cap)
    t = support_tuples(H)
    best = None
    for perm in itertools.permutations(range(k + 1)):
        conj = from_support(t[:, list(perm)], n)
        cand = _isotopy_min(conj.array, n, budget)
        if best is None or cand < best:
            best = cand
    arr = np.frombuffer(best, dtype=np.uint8).astype(np.int64).reshape((n,) * k)
    return LatinHypercube.from_array(arr)


def species_equivalent(X1, X2, cap: int | None = None) -> bool:
    """True iff some element of S_n wr S_{k+1} maps X1 to X2.

    Raises CapExceeded (undecided) rather than guessing.
    """
    H1, H2 = _as_hypercube(X1), _as_hypercube(X2)
    if H1.dim != H2.dim or H1.order != H2.order:
        raise ValueError("species comparison needs equal dimension and order")
    if H1 == H2:
        return True
    return canonical_form(H1, cap) == canonical_form(H2, cap)


def partition_species(cubes: Sequence, cap: int | None = None) -> list[list[int]]:
    """Group indices of ``cubes`` by species, in order of first appearance."""
    classes: dict[LatinHypercube, list[int]] = {}
    for i, X in enumerate(cubes):
        classes.setdefault(canonical_form(X, cap), []).append(i)
    return list(classes.values())
