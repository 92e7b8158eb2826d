from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qkfinite.qseries import (
    INF,
    ONE,
    ZERO,
    NilpotentSeries,
    NovikovSeries,
    RationalQ,
    euler_factor,
    j_coefficient_Pn,
    mat,
    nu,
    order_at_infinity,
    series_invert,
    series_multiply,
    verify_lemma_bound_A1,
)

q = RationalQ.q()


def test_order_examples():
    assert order_at_infinity(1 / (1 - q)) == 1
    assert order_at_infinity(q ** 2 / (1 - q) ** 3) == 1
    assert order_at_infinity(ONE) == 0
    assert order_at_infinity(ZERO) == INF and INF == math.inf


def test_canonical_form():
    f = RationalQ([2, 2], [4, 0, -4])  # (2 + 2q) / (4 - 4q^2) = 1/(2 - 2q)
    assert f.denominator_coeffs() == [-1, 1]
    assert f.numerator_coeffs() == [Fraction(-1, 2)]
    assert f == 1 / (2 - 2 * q)
    assert hash(f) == hash(1 / (2 - 2 * q))
    with pytest.raises(ZeroDivisionError):
        RationalQ(1, 0)


def test_euler_factor():
    assert euler_factor([1]) == 1 - q
    assert euler_factor([1, 1]) == (1 - q) ** 2
    assert euler_factor([1, 2]).numerator_coeffs() == [1, -1, -1, 1]
    for bad in ([], [0], [-2]):
        with pytest.raises(ValueError):
            euler_factor(bad)


poly = st.lists(st.integers(-4, 4), min_size=1, max_size=4)


def rq(num, den):
    if not any(den):
        den = [1]
    return RationalQ(num, den)


@given(poly, poly, poly, poly)
def test_order_is_a_valuation(a, b, c, d):
    f, g = rq(a, b), rq(c, d)
    assert (f * g).order == f.order + g.order
    assert (f + g).order >= min(f.order, g.order)


@given(poly, poly, st.integers(-3, 3))
def test_evaluation_and_json(a, b, x):
    f = rq(a, b)
    assert RationalQ.from_json(f.to_json()) == f
    den = sum(c * x ** k for k, c in enumerate(b)) if any(b) else 1
    if f.den(x) != 0 and den != 0:
        num = sum(c * x ** k for k, c in enumerate(a))
        assert f(x) == Fraction(num, den)


def test_roots_of_unity_detection():
    assert (1 / euler_factor([1, 2, 3])).poles_at_roots_of_unity()
    assert (1 / (1 + q + q ** 2)).poles_at_roots_of_unity()
    assert not (1 / (1 - 3 * q)).poles_at_roots_of_unity()
    assert not (1 / (1 - q - q ** 2)).poles_at_roots_of_unity()
    assert not (1 / q).regular_at_zero()


def test_j_closed_forms():
    assert j_coefficient_Pn(1, 0) == NilpotentSeries((ONE, ZERO))
    # ((1-q) + q h)^{-2} = 1/(1-q)^2 - 2q h/(1-q)^3
    assert j_coefficient_Pn(1, 1).coeffs == (1 / (1 - q) ** 2, -2 * q / (1 - q) ** 3)
    assert nu(1, 0) == 0 and nu(1, 1) == 2 and nu(1, 2) == 6 and nu(1, 3) == 12


@pytest.mark.parametrize("n,d", [(1, 4), (2, 3), (3, 2)])
def test_j_telescopes(n, d):
    prod = j_coefficient_Pn(n, d)
    for m in range(1, d + 1):
        f = NilpotentSeries((1 - RationalQ.q(m), RationalQ.q(m)) + (ZERO,) * (n - 1))
        prod = prod * f ** (n + 1)
    assert prod == NilpotentSeries.constant(ONE, n)
    assert all(c.poles_at_roots_of_unity() for c in j_coefficient_Pn(n, d).coeffs)


def test_lemma_bound_a1():
    for dmax in (1, 5, 10):
        rep = verify_lemma_bound_A1(dmax)
        assert rep["holds"] and rep["equality"]
    assert [r["nu"] for r in verify_lemma_bound_A1(10)["rows"]] == [d + d * d for d in range(1, 11)]
    with pytest.raises(ValueError):
        verify_lemma_bound_A1(0)


def test_line_bundle_basis():
    # h = 1 - P
    x = NilpotentSeries((ZERO, ONE))
    assert x.to_line_bundle_basis() == (ONE, -ONE)
    assert NilpotentSeries((ONE, ZERO, ONE)).to_line_bundle_basis() == (2 * ONE, -2 * ONE, ONE)


def test_nilpotent_inverse():
    x = NilpotentSeries((2 - q, q, 3 * ONE))
    assert x * x.inverse() == NilpotentSeries.constant(ONE, 2)
    with pytest.raises(ZeroDivisionError):
        NilpotentSeries((ZERO, ONE)).inverse()
    with pytest.raises(ValueError):
        x * NilpotentSeries((ONE,))


def test_geometric_series():
    t = NovikovSeries.scalar((6,), {0: 1, 1: -1})
    s = series_invert(t)
    assert all(s.coefficient((d,)) == ((ONE,),) for d in range(7))


def test_identity_inverse():
    i = NovikovSeries.identity((3, 2), 2)
    assert series_invert(i) == i


def test_square_of_single_term():
    M = mat([[1, q], [0, 2]])
    t = NovikovSeries((4,), 2, {(0,): mat([[1, 0], [0, 1]]), (1,): M})
    s = series_invert(t)
    from qkfinite.qseries import mat_mul, mat_scale
    assert s.coefficient((1,)) == mat_scale(M, -1)
    assert s.coefficient((2,)) == mat_mul(M, M)


def test_singular_inversion():
    with pytest.raises(ZeroDivisionError):
        series_invert(NovikovSeries((2,), 2, {(0,): mat([[1, 1], [1, 1]])}))


entry = st.sampled_from([ZERO, ONE, q, 1 / (1 - q), q / (1 - q ** 2), 2 - q, Fraction(1, 3) * ONE])


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), entry, entry), max_size=4), st.integers(0, 2))
def test_invert_round_trip(terms, seed):
    coeffs = {(0, 0): mat([[1, seed], [0, 1]])}
    for a, b, x, y in terms:
        if (a, b) != (0, 0):
            coeffs[(a, b)] = ((x, y), (y, x))
    t = NovikovSeries((2, 2), 2, coeffs)
    s = series_invert(t)
    one = NovikovSeries.identity((2, 2), 2)
    assert series_multiply(t, s) == one
    assert series_multiply(s, t) == one
    assert series_invert(s) == t
    assert NovikovSeries.from_json(t.to_json()) == t


def test_truncation_validation():
    with pytest.raises(ValueError):
        NovikovSeries((2,), 1, {(3,): ((ONE,),)})
    with pytest.raises(ValueError):
        NovikovSeries((2,), 2, {(1,): ((ONE,),)})
    t = NovikovSeries((2,), 1, {})
    assert (0,) in t.coeffs
