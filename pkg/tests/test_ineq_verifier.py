from __future__ import annotations

import pytest
import sympy
from hypothesis import given, strategies as st

from qkfinite.degree_enumerator import ProductSpec, first_nonzero_admissible
from qkfinite.ineq_verifier import (
    all_types,
    bordered_form,
    bordered_matrix,
    brute_force_inequality,
    certificate,
    det_2AQ,
    det_2AR,
    e8_vertex_scan,
    is_positive_definite,
    table1,
    verify_lemma,
)
from qkfinite.root_system import build, norm, support_size

# det(2A_Q) = 2r det(2A_R) - det of the gram with vertex i deleted, worked by hand
# for A1 (2*1*2 - 1) and A2 (2*2*3 - 2).
SMALL = [("A1", 1, 3), ("A2", 1, 10), ("A2", 2, 10), ("B2", 2, 2 * 2 * 4 - 4)]


@pytest.mark.parametrize("name,i,expected", SMALL)
def test_bordered_determinants(name, i, expected):
    assert det_2AQ(name, i) == expected
    assert sympy.Matrix(bordered_form(name, i).matrix_2AQ).det() == expected


def test_a2_minors():
    assert is_positive_definite(bordered_form("A2", 1).matrix_2AQ).minors == (2, 3, 10)


def test_table1_all_match():
    rows = table1(8)
    assert all(r["match"] for r in rows)
    by = {r["type"]: r["det_2AR"] for r in rows}
    assert by["E8"] == 1 and by["B5"] == 32 and by["A7"] == 8


# Oracle: sympy determinants of the bordered matrices, frozen from an independent run.
E8_DETS = [2 * 8 - int(sympy.Matrix([[build("E8").gram[a][b] for b in range(8) if b != i]
                                     for a in range(8) if a != i]).det()) for i in range(8)]


def test_e8_vertex_scan():
    scan = e8_vertex_scan()
    assert [r["det_2AQ"] for r in scan] == E8_DETS
    assert scan[3]["det_2AQ"] == -14
    assert [r["i"] for r in scan if r["sign"] < 0] == [4, 5]


def test_e8_fails_only_at_negative_vertices():
    e8 = build("E8")
    assert [verify_lemma(e8, i) for i in range(1, 9)] == [True, True, True, False, False, True, True, True]


@pytest.mark.parametrize("t", all_types(7, classical_max=6), ids=str)
def test_lemma_holds_off_e8(t):
    for i in range(1, t.rank + 1):
        assert verify_lemma(t, i)
        assert det_2AQ(t, i) > 0


@pytest.mark.parametrize("name,i", [("A3", 2), ("B3", 1), ("C3", 3), ("G2", 1), ("G2", 2), ("F4", 2)])
def test_brute_force_agrees(name, i):
    bf = brute_force_inequality(name, i, 5)
    assert bf.holds and bf.violating_d is None
    assert bf.points == 6 ** build(name).rank


@pytest.mark.slow
def test_brute_force_reaches_e8_violation():
    e8 = build("E8")
    w = first_nonzero_admissible(ProductSpec(e8, (4,)))
    assert w is not None
    assert norm(e8, w) // 2 + support_size(w) <= w[3]
    # every violator has some coordinate >= 10, so [0,9]^8 is clean and [0,10]^8 is not
    assert brute_force_inequality(e8, 4, 9).holds
    bf = brute_force_inequality(e8, 4, 10)
    assert not bf.holds
    d = bf.violating_d
    assert norm(e8, d) // 2 + support_size(d) <= d[3] and any(d) and max(d) == 10


def test_e8_fork_needs_box_beyond_six():
    assert brute_force_inequality("E8", 4, 6).holds


@given(st.sampled_from(all_types(6, classical_max=5)), st.data())
def test_inequality_property(t, data):
    rs = build(t)
    i = data.draw(st.integers(1, rs.rank))
    d = data.draw(st.lists(st.integers(0, 8), min_size=rs.rank, max_size=rs.rank))
    if any(d):
        assert norm(rs, d) // 2 + support_size(d) > d[i - 1]


def test_certificate_json():
    c = certificate("A2", 1, radius=3)
    assert c["det_2AQ"] == 10 and c["verdict"] and c["brute_force_holds"]
    assert c["minors"] == ["2", "3", "10"]


def test_input_validation():
    with pytest.raises(ValueError):
        bordered_form("A2", 3)
    with pytest.raises(ValueError):
        is_positive_definite([[1, 2], [0, 1]])
    with pytest.raises(ValueError):
        brute_force_inequality("A2", 1, 0)
    assert bordered_matrix([[2]], 0) == [[2, -1], [-1, 2]]
    assert det_2AR("D4") == 4
