import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polystoch.constructions import (
    A6_SHA256,
    DEFAULT_EPSILONS,
    ZeroFamilySpec,
    a6,
    a6_certificate,
    a6_terms,
    count_zero_species,
    hull_witness,
    independent_zero_set,
    maximal_r,
    mols_pair,
    perturbation_scan,
    uniform_permanent,
    zero_family,
)
from polystoch.errors import CapExceeded
from polystoch.latin import (
    cyclic,
    is_orthogonal,
    lift,
    linear_hypercube,
    p_of_h,
)
from polystoch.permanent import count_transversals, mixed_transversal_exists, permanent1
from polystoch.polytope import rank_independent
from polystoch.species import partition_species
from polystoch.tensor import (
    Tensor,
    average,
    combine,
    is_permutation_matrix,
    is_polystochastic,
    uniform,
)

# support columns (1-based) of each row, layer by layer; "25" marks halves in columns 2 and 5
A6_ROWS = [
    "1 2 3 4 5 6",
    "25 1 4 6 3 25",
    "3 6 1 5 2 4",
    "4 5 2 1 6 3",
    "25 4 6 3 1 25",
    "6 3 5 2 4 1",
]


def _a6_from_rows():
    arr = [[[Fraction(0)] * 6 for _ in range(6)] for _ in range(6)]
    for layer, spec in enumerate(A6_ROWS):
        for i, tok in enumerate(spec.split()):
            w = Fraction(1, len(tok))
            for ch in tok:
                arr[layer][i][int(ch) - 1] += w
    return Tensor.from_array(arr)


def test_maximal_r():
    assert [maximal_r(n) for n in (2, 3, 4, 6, 7, 8, 12, 13)] == [1, 2, 2, 2, 3, 3, 3, 4]


def test_spec_defaults_and_validation():
    s = ZeroFamilySpec(3, 8)
    assert s.r == 3 and s.window == [5, 6, 7]
    assert ZeroFamilySpec(3, 4, window_start=3).window == [3, 0]
    for bad in [dict(d=4, n=4), dict(d=3, n=5), dict(d=3, n=4, r=3), dict(d=3, n=4, axis=2)]:
        with pytest.raises(ValueError):
            ZeroFamilySpec(**bad)


def test_zero_family_examples():
    fam = zero_family(ZeroFamilySpec(3, 4, 2, window_start=2))
    assert len(fam) == 2
    assert all(count_transversals(L)[0] == 0 for L in fam)
    assert zero_family(ZeroFamilySpec(3, 4, 1)) == [cyclic(2, 4)]
    sample = zero_family(ZeroFamilySpec(3, 6, 2), "sample", 20, seed=5)
    assert len(sample) == 20
    assert all(permanent1(p_of_h(L)).value == 0 for L in sample)
    for a, b in itertools.combinations(set(sample), 2):
        assert mixed_transversal_exists([a, b]) is None


def test_zero_family_members_agree_outside_window():
    spec = ZeroFamilySpec(3, 8, window_start=6, axis=1)
    C = cyclic(2, 8)
    for L in zero_family(spec, "sample", 5, seed=1):
        for c, e in zip(L.cells(), C.cells()):
            if c.coords[1] not in spec.window:
                assert c.symbol == e.symbol


def test_zero_family_mode_and_cap():
    with pytest.raises(ValueError):
        zero_family(ZeroFamilySpec(3, 4), mode="all")
    with pytest.raises(CapExceeded):
        zero_family(ZeroFamilySpec(3, 8), cap=10)


@settings(max_examples=12)
@given(st.integers(0, 10**6), st.sampled_from([(3, 8), (3, 10), (5, 4)]))
def test_zero_family_property(seed, dn):
    d, n = dn
    rng = random.Random(seed)
    spec = ZeroFamilySpec(d, n, window_start=rng.randrange(n), axis=rng.randrange(d - 1))
    members = zero_family(spec, "sample", 4, seed=seed)
    for H in members:
        assert permanent1(p_of_h(H)).value == 0
    assert mixed_transversal_exists(members) is None
    assert permanent1(average([p_of_h(H) for H in members])).value == 0


def test_independent_zero_set():
    Z = independent_zero_set(3, 8)
    assert len(Z) == 4 and rank_independent(Z) == (4, True)
    assert permanent1(average(Z + [p_of_h(cyclic(2, 8))])).value == 0
    (D,) = independent_zero_set(3, 4)
    assert permanent1(average([D, p_of_h(cyclic(2, 4))])).value == 0
    Z10 = independent_zero_set(3, 10)
    assert len(Z10) == 5 * ((maximal_r(10) - 1) // 2)
    Z5 = independent_zero_set(5, 8)
    assert all(is_permutation_matrix(P, 1) and P.dim == 5 for P in Z5)
    assert rank_independent(Z5) == (4, True)
    (D5,) = independent_zero_set(5, 4)
    assert permanent1(average([D5, p_of_h(cyclic(4, 4))])).value == 0


def test_independent_zero_set_parity():
    for d, n in [(3, 5), (4, 8), (3, 2), (1, 8)]:
        with pytest.raises(ValueError):
            independent_zero_set(d, n)


def test_a6_transcription():
    A = a6()
    assert A == _a6_from_rows()
    assert is_polystochastic(A, 1)
    assert list(A.array[1][0]) == [0, Fraction(1, 2), 0, 0, Fraction(1, 2), 0]


def test_a6_certificate():
    terms = a6_terms()
    assert len(terms) == 8
    assert all(is_permutation_matrix(t, 2) for t in terms.tensors)
    assert [w * 6 for w in terms.weights] == [1, 1, 1, 1] + [Fraction(1, 2)] * 4
    assert combine(terms) * 6 == a6()
    cert = a6_certificate()
    assert cert.verify() and cert.scale == Fraction(1, 6)


def test_a6_checksum_constant():
    assert len(A6_SHA256) == 64


@pytest.mark.parametrize("n", [3, 4, 5, 7, 8, 9, 11, 12, 16, 20])
def test_mols_pair(n):
    L1, L2 = mols_pair(n)
    assert L1.order == n and is_orthogonal(L1, L2)


def test_mols_examples():
    assert mols_pair(3) == (linear_hypercube(2, 3, 0, (1, 1)), linear_hypercube(2, 3, 0, (2, 1)))
    for n in (2, 6, 1):
        with pytest.raises(ValueError):
            mols_pair(n)


@pytest.mark.slow
def test_mols_order_ten_search():
    L1, L2 = mols_pair(10)
    assert is_orthogonal(L1, L2)
    assert mols_pair(10) == (L1, L2)


def test_hull_witness_base_cases():
    cert = hull_witness(3, 3)
    assert len(cert.terms) == 3 and cert.terms.weights == [Fraction(1, 3)] * 3
    assert all(is_permutation_matrix(t, 2) for t in cert.terms.tensors)
    assert cert.verify()
    six = hull_witness(3, 6)
    assert six == a6_certificate()


@pytest.mark.parametrize("d,n", [(5, 3), (3, 4), (3, 5), (5, 4)])
def test_hull_witness_pipeline(d, n):
    cert = hull_witness(d, n)
    assert cert.verify()
    assert cert.s == d - 1 and cert.scale == Fraction(1, n ** (d - 2))
    assert all(is_permutation_matrix(t, d - 1) for t in cert.terms.tensors)
    assert is_polystochastic(cert.target, 1)
    assert cert.target != uniform(d, n)


def test_hull_witness_errors():
    with pytest.raises(ValueError):
        hull_witness(4, 3)
    with pytest.raises(ValueError):
        hull_witness(3, 2)
    with pytest.raises(CapExceeded):
        hull_witness(7, 5, cap=10**4)


def test_perturbation_scan_examples():
    res = perturbation_scan(p_of_h(cyclic(2, 4)), [Fraction(1, 10)])
    assert res.baseline == Fraction(9, 4) and res.values[0] < Fraction(9, 4)
    res = perturbation_scan(p_of_h(cyclic(3, 3)), [Fraction(1, 10)])
    assert res.baseline == 8 and res.values[0] > 8
    res = perturbation_scan(p_of_h(cyclic(2, 4)), [0])
    assert res.values == (res.baseline,) and res.signs() == [0]
    assert perturbation_scan(p_of_h(cyclic(2, 3))).epsilons == DEFAULT_EPSILONS


def test_baseline_formula_matches_permanent():
    for d, n in [(2, 3), (3, 3), (3, 4), (4, 3), (3, 5)]:
        assert uniform_permanent(d, n) == permanent1(uniform(d, n)).value


def test_perturbation_scan_errors():
    with pytest.raises(ValueError):
        perturbation_scan(Tensor.from_array([[1, 1], [0, 0]]))
    with pytest.raises(ValueError):
        perturbation_scan(p_of_h(cyclic(2, 3)), [Fraction(3, 2)])


def test_count_zero_species():
    assert count_zero_species(2, 3) == 1
    fam = zero_family(ZeroFamilySpec(3, 4))
    assert all(count_transversals(L)[0] == 0 for L in fam)
    assert count_zero_species(4, 3) == len(partition_species(fam))
    assert count_zero_species(4, 5) == len(partition_species([lift(L, 4) for L in fam]))
