from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from qkfinite.ineq_verifier import all_types
from qkfinite.root_system import (
    RootSystemType,
    build,
    build_product,
    dynkin_neighbours,
    e8_fork,
    k_exponent,
    m_exponent,
    norm,
    support_size,
    type_a_norm,
)

TYPES = all_types(8, classical_max=8)


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_gram_is_symmetrized_cartan(t):
    rs = build(t)
    n = rs.rank
    for i in range(n):
        assert rs.cartan[i][i] == 2
        for j in range(n):
            assert rs.gram[i][j] == rs.gram[j][i]
            assert rs.gram[i][j] == rs.symmetrizer[i] * rs.cartan[i][j]
    # short roots have squared length 2
    assert min(rs.gram[i][i] for i in range(n)) == 2


def test_known_cartan_matrices():
    assert build("G2").cartan == ((2, -1), (-3, 2))
    assert build("B2").gram == ((4, -2), (-2, 2))
    assert build("C3").gram == ((2, -1, 0), (-1, 2, -2), (0, -2, 4))
    assert build("F4").cartan[1][2] == -1 and build("F4").cartan[2][1] == -2


@pytest.mark.parametrize("name,expected", [("A4", 5), ("B3", 8), ("C5", 4), ("D6", 4),
                                           ("E6", 3), ("E7", 2), ("E8", 1), ("F4", 4), ("G2", 3)])
def test_gram_determinants_against_sympy(name, expected):
    assert sympy.Matrix(build(name).gram).det() == expected


def test_e_diagram():
    e8 = build("E8")
    assert e8_fork() == 4
    assert sorted(j + 1 for j in dynkin_neighbours(e8, 3)) == [2, 3, 5]
    assert sorted(j + 1 for j in dynkin_neighbours(e8, 0)) == [3]


def test_parse():
    assert RootSystemType.parse("e8") == RootSystemType("E", 8)
    assert RootSystemType.parse("A", 3) == RootSystemType("A", 3)
    assert RootSystemType.parse("A1", 1).rank == 1
    for bad in [("E9",), ("B1",), ("H3",), ("A",), ("A2", 3)]:
        with pytest.raises(ValueError):
            RootSystemType.parse(*bad)


def test_product_is_block_diagonal():
    rs = build_product(["A1", "G2"])
    assert rs.rank == 3
    assert rs.gram == ((2, 0, 0), (0, 6, -3), (0, -3, 2))
    assert str(rs) == "A1xG2"
    with pytest.raises(ValueError):
        rs.type


vec = st.lists(st.integers(0, 6), min_size=1, max_size=7)


@given(vec)
def test_type_a_norm_telescopes(d):
    assert norm(build(RootSystemType("A", len(d))), d) == type_a_norm(d)


@given(st.sampled_from(TYPES), st.data())
def test_norm_even_and_exponents(t, data):
    rs = build(t)
    d = data.draw(st.lists(st.integers(0, 5), min_size=rs.rank, max_size=rs.rank))
    assert norm(rs, d) % 2 == 0
    assert m_exponent(rs, d) == support_size(d) + norm(rs, d) // 2
    if rs.simply_laced:
        assert k_exponent(rs, d) == sum(d) + norm(rs, d) // 2
        assert k_exponent(rs, d) >= m_exponent(rs, d)


def test_exponent_examples():
    a1 = build("A1")
    assert [k_exponent(a1, (d,)) for d in range(4)] == [0, 2, 6, 12]
    assert m_exponent(build("A2"), (1, 1)) == 2 + 1
    with pytest.raises(ValueError):
        k_exponent(build("B2"), (1, 1))
    with pytest.raises(ValueError):
        support_size((1, -1))
    with pytest.raises(ValueError):
        norm(a1, (1, 1))


def test_symmetrizer_is_half_length():
    assert build("G2").symmetrizer == (Fraction(3), Fraction(1))
