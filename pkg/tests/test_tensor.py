import itertools
import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import latin, tensors
from polystoch.latin import cyclic, p_of_h, random_latin_hypercube
from polystoch.tensor import (
    ConvexCombination,
    PlaneSpec,
    Tensor,
    as_fraction,
    combine,
    count_planes,
    identity_matrix,
    is_permutation_matrix,
    is_polystochastic,
    iter_planes,
    linear_combination,
    ones,
    plane_sum,
    planes_scaled,
    polystochastic_violation,
    product,
    uniform,
)


def test_entries_are_exact_fractions():
    t = Tensor(2, 2, [1, "1/3", Fraction(2, 4), 0])
    assert t.entries == (Fraction(1), Fraction(1, 3), Fraction(1, 2), Fraction(0))
    assert t[0, 1] == Fraction(1, 3)


def test_inexact_float_rejected():
    with pytest.raises(ValueError):
        as_fraction(0.1)
    assert as_fraction(0.5) == Fraction(1, 2)


def test_wrong_entry_count():
    with pytest.raises(ValueError):
        Tensor(3, 2, [0] * 7)


def test_plane_sum_examples():
    J = ones(2, 3)
    assert plane_sum(J, PlaneSpec((1,), (0,))) == 3
    P = p_of_h(cyclic(2, 3))
    for p in iter_planes(3, 3, 1):
        assert plane_sum(P, p) == 1
    for p in iter_planes(3, 3, 2):
        assert plane_sum(ones(3, 3), p) == 9
    assert plane_sum(uniform(3, 4), PlaneSpec((0, 2), (1,))) == 4


def test_plane_spec_validation():
    with pytest.raises(ValueError):
        plane_sum(ones(2, 3), PlaneSpec((0,), (5,)))
    with pytest.raises(ValueError):
        plane_sum(ones(3, 3), PlaneSpec((0,), (1,)))


def test_count_planes():
    assert count_planes(3, 4, 1) == 3 * 16
    assert len(list(iter_planes(3, 4, 1))) == 48
    assert len(list(iter_planes(4, 2, 2))) == 6 * 4


def test_polystochastic_predicates():
    assert is_polystochastic(uniform(3, 3), 1)
    assert not is_polystochastic(p_of_h(cyclic(2, 4)), 2)
    assert is_permutation_matrix(p_of_h(cyclic(2, 3)), 1)
    assert not is_permutation_matrix(ones(3, 2), 1)
    with pytest.raises(ValueError):
        is_polystochastic(uniform(3, 3), 3)
    with pytest.raises(ValueError):
        is_permutation_matrix(uniform(3, 3), 0)


def test_negative_entry_reported_not_raised():
    A = Tensor(2, 2, [Fraction(3, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(3, 2)])
    assert not is_polystochastic(A, 1)
    assert "negative" in polystochastic_violation(A, 1)


def test_uniform():
    assert uniform(2, 2).entries == (Fraction(1, 2),) * 4


def test_product_examples():
    for n in (2, 3):
        assert product(uniform(3, n), uniform(3, n)) == uniform(4, n)
    B = Tensor.from_array([[1, 2], [3, 4]])
    assert product(identity_matrix(2), B) == B
    P = p_of_h(cyclic(2, 3))
    assert is_permutation_matrix(product(P, P), 1)


def test_product_matches_matrix_multiplication():
    rng = random.Random(3)
    a = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
    b = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
    expect = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert product(Tensor.from_array(a), Tensor.from_array(b)) == Tensor.from_array(expect)


def test_product_formula_against_loops():
    rng = random.Random(4)
    n = 2
    A = Tensor.from_function(3, n, lambda ix: rng.randint(-2, 2))
    B = Tensor.from_function(2, n, lambda ix: rng.randint(-2, 2))
    C = product(A, B)
    assert C.dim == 3
    for i1, i2, i3 in itertools.product(range(n), repeat=3):
        assert C[i1, i2, i3] == sum(A[i1, i2, j] * B[j, i3] for j in range(n))


def test_product_errors():
    with pytest.raises(ValueError):
        product(uniform(3, 2), uniform(3, 3))
    with pytest.raises(ValueError):
        product(Tensor(1, 2, [1, 1]), uniform(2, 2))


def test_combine_examples():
    P = p_of_h(cyclic(2, 3))
    half = Fraction(1, 2)
    assert combine(ConvexCombination(((half, P), (half, P)))) == P
    swap = Tensor.from_array([[0, 1], [1, 0]])
    assert combine(ConvexCombination(((half, identity_matrix(2)), (half, swap)))) == uniform(2, 2)


def test_convex_combination_invariants():
    I = identity_matrix(2)
    with pytest.raises(ValueError):
        ConvexCombination(((Fraction(1, 2), I), (Fraction(1, 3), I)))
    with pytest.raises(ValueError):
        ConvexCombination(((Fraction(0), I), (Fraction(1), I)))
    with pytest.raises(ValueError):
        ConvexCombination(((Fraction(1, 2), I), (Fraction(1, 2), uniform(2, 3))))


def test_json_round_trip_exact():
    A = Tensor(2, 2, ["1/3", -2, "7/5", 0])
    doc = json.loads(json.dumps(A.to_json()))
    assert doc["entries"] == ["1/3", -2, "7/5", 0]
    assert Tensor.from_json(doc) == A


@given(tensors())
def test_json_round_trip_property(A):
    assert Tensor.from_json(json.loads(json.dumps(A.to_json()))) == A


def _random_omega1(d, n, rng):
    m = rng.randint(1, 3)
    raw = [Fraction(rng.randint(1, 5)) for _ in range(m)]
    return combine(ConvexCombination(tuple(
        (w / sum(raw), p_of_h(random_latin_hypercube(d - 1, n, rng))) for w in raw)))


@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.sampled_from([2, 3]), st.sampled_from([2, 3]))
def test_product_of_polystochastic_is_polystochastic(seed, p, q, n):
    rng = random.Random(seed)
    C = product(_random_omega1(p, n, rng), _random_omega1(q, n, rng))
    assert C.dim == p + q - 2
    assert is_polystochastic(C, 1)


def _random_lambda(d, s, n, rng):
    """Random s-permutation matrix for s in {1, d-1}."""
    if s == 1:
        return p_of_h(random_latin_hypercube(d - 1, n, rng))
    assert s == d - 1
    perms = [rng.sample(range(n), n) for _ in range(d - 1)]
    return Tensor.from_cells(d, n, [(i,) + tuple(p[i] for p in perms) for i in range(n)])


@given(st.integers(0, 10**6), st.sampled_from([2, 3]),
       st.sampled_from([(3, 1), (3, 2), (2, 1)]), st.sampled_from([(3, 1), (3, 2), (2, 1)]))
def test_plane_sums_of_permutation_products(seed, n, ps, qt):
    """r-plane sums of A x B equal n^(r-s-t+1) for max(p+t-2, q+s-2) <= r <= p+q-3."""
    (p, s), (q, t) = ps, qt
    rng = random.Random(seed)
    C = product(_random_lambda(p, s, n, rng), _random_lambda(q, t, n, rng))
    for r in range(max(p + t - 2, q + s - 2, 1), p + q - 2):
        assert planes_scaled(C, r) == Fraction(n) ** (r - s - t + 1)


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_product_associative_and_distributive(seed, n):
    rng = random.Random(seed)

    def rand(d):
        return Tensor.from_function(d, n, lambda ix: Fraction(rng.randint(-3, 3), rng.randint(1, 3)))

    A, B, C = rand(rng.choice([2, 3])), rand(rng.choice([2, 3])), rand(rng.choice([2, 3]))
    assert product(product(A, B), C) == product(A, product(B, C))
    B2 = rand(B.dim)
    w = Fraction(rng.randint(1, 4), 5)
    mix = linear_combination([(w, B), (1 - w, B2)])
    assert product(A, mix) == linear_combination([(w, product(A, B)), (1 - w, product(A, B2))])


@given(latin(dims=(1, 2, 3), orders=(2, 3, 4)))
def test_permutation_matrices_are_polystochastic(H):
    P = p_of_h(H)
    assert is_permutation_matrix(P, 1)
    assert is_polystochastic(P, 1)


def test_array_view_read_only():
    A = uniform(2, 2)
    assert A.array.dtype == object
    with pytest.raises(ValueError):
        A.array[0, 0] = 1
    assert np.array_equal(A.array, np.full((2, 2), Fraction(1, 2), dtype=object))
