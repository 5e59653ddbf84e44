from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from polystoch.linalg import nullspace, rank, rref

matrices = st.integers(1, 5).flatmap(lambda c: st.lists(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=c, max_size=c),
    min_size=1, max_size=5))


def _sym(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])


@given(matrices)
def test_rank_matches_sympy(rows):
    assert rank(rows) == _sym(rows).rank()


@given(matrices)
def test_rref_matches_sympy(rows):
    reduced, pivots = rref(rows)
    ref, ref_pivots = _sym(rows).rref()
    assert tuple(pivots) == tuple(ref_pivots)
    for i, r in enumerate(reduced[:len(pivots)]):
        assert [sympy.Rational(x.numerator, x.denominator) for x in r] == list(ref.row(i))


@given(matrices)
def test_nullspace_is_kernel_of_right_dimension(rows):
    ncols = len(rows[0])
    basis = nullspace(rows, ncols)
    assert len(basis) == ncols - rank(rows)
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    if basis:
        assert rank(basis) == len(basis)


def test_small_cases():
    assert rank([[1, 2], [2, 4]]) == 1
    assert nullspace([[1, 1]], 2) == [[Fraction(-1), Fraction(1)]]
    assert rank([]) == 0
