from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from qkfinite.exact import (
    bareiss_det,
    ceil_center_minus_root,
    cofactor_det,
    floor_center_plus_root,
    inverse,
    is_symmetric,
    ldl,
    leading_principal_minors,
    solve_ldl,
)


def square(max_n=5, lo=-6, hi=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n))


@given(square())
def test_bareiss_matches_sympy(m):
    assert bareiss_det(m) == sympy.Matrix(m).det()


@given(square(4))
def test_bareiss_matches_cofactor(m):
    assert bareiss_det(m) == cofactor_det(m)


@given(square(4))
def test_bareiss_rational(m):
    q = [[Fraction(x, 3) for x in row] for row in m]
    assert bareiss_det(q) == Fraction(bareiss_det(m), 3 ** len(m))


def test_empty_and_singular():
    assert bareiss_det([]) == 1
    assert bareiss_det([[1, 2], [2, 4]]) == 0
    assert bareiss_det([[0, 1], [1, 0]]) == -1


@given(square(5))
def test_leading_minors(m):
    got = leading_principal_minors(m)
    assert got == [sympy.Matrix([r[:k] for r in m[:k]]).det() for k in range(1, len(m) + 1)]


def test_ldl_reconstructs():
    a = [[4, -2, 0], [-2, 2, -1], [0, -1, 2]]
    L, D = ldl(a)
    n = len(a)
    rebuilt = [[sum(L[i][k] * D[k] * L[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
    assert rebuilt == a
    x = solve_ldl(L, D, [1, 2, 3])
    assert [sum(a[i][j] * x[j] for j in range(n)) for i in range(n)] == [1, 2, 3]


def test_ldl_zero_pivot():
    with pytest.raises(ValueError):
        ldl([[0, 1], [1, 0]])


@given(square(4))
def test_inverse(m):
    if bareiss_det(m) == 0:
        with pytest.raises(ZeroDivisionError):
            inverse(m)
        return
    inv = inverse(m)
    n = len(m)
    assert [[sum(m[i][k] * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)] == \
        [[int(i == j) for j in range(n)] for i in range(n)]


def test_symmetric():
    assert is_symmetric([[1, 2], [2, 1]])
    assert not is_symmetric([[1, 2], [3, 1]])
    with pytest.raises(ValueError):
        is_symmetric([[1, 2]])


fracs = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@given(fracs, st.fractions(min_value=0, max_value=200, max_denominator=12))
def test_interval_endpoints(c, rho):
    h = floor_center_plus_root(c, rho)
    # h is admissible, h + 1 is not
    assert h <= c or (h - c) ** 2 <= rho
    assert (h + 1) > c and (h + 1 - c) ** 2 > rho
    lo = ceil_center_minus_root(c, rho)
    assert lo >= c or (c - lo) ** 2 <= rho
    assert (lo - 1) < c and (c - lo + 1) ** 2 > rho


def test_interval_perfect_square():
    assert floor_center_plus_root(Fraction(0), Fraction(9)) == 3
    assert ceil_center_minus_root(Fraction(0), Fraction(9)) == -3
    assert floor_center_plus_root(Fraction(1, 2), Fraction(0)) == 0
