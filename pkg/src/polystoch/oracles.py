"""Slow, independent reference computations used to cross-check the fast paths.

Nothing here shares code with the permanent search: these are direct sums
over tuples of permutations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .tensor import Tensor


def naive_permanent(A: Tensor) -> Fraction:
    """Sum over (sigma_2, ..., sigma_d) of prod_i A(i, sigma_2(i), ..., sigma_d(i))."""
    n, d = A.order, A.dim
    arr = A.array
    perms = list(itertools.permutations(range(n)))
    total = Fraction(0)
    for sigmas in itertools.product(perms, repeat=d - 1):
        p = Fraction(1)
        for i in range(n):
            p *= arr[(i,) + tuple(s[i] for s in sigmas)]
            if not p:
                break
        total += p
    return total


def pair_permanent_int(arr: np.ndarray) -> int:
    """Permanent of an integer 3-dimensional array by enumerating permutation pairs.

    Vectorised over tau for each sigma; (n!)^2 products in all.
    """
    arr = np.asarray(arr, dtype=np.int64)
    n = arr.shape[0]
    if arr.shape != (n, n, n):
        raise ValueError("expected an n x n x n array")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    rows = np.arange(n)
    total = 0
    for sigma in perms:
        M = arr[rows, sigma, :]                 # M[i, c] = A(i, sigma(i), c)
        total += int(M[rows, perms].prod(axis=1).sum())
    return total


def transversals_by_column_permutation(square: np.ndarray) -> int:
    """Count column permutations whose selected symbols are all distinct."""
    square = np.asarray(square)
    n = square.shape[0]
    rows = np.arange(n)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    picked = np.sort(square[rows, perms], axis=1)
    return int((picked == rows).all(axis=1).sum())
