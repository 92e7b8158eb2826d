from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qkfinite.acceptance import distinct_specs
from qkfinite.degree_enumerator import (
    LiftMap,
    ProductSpec,
    Variant,
    admissible_degrees,
    box_scan,
    degree_bound_report,
    eigenvalue_lower_bound,
    enumerate_sublevel,
    first_nonzero_admissible,
    objective,
    oracle_box,
)
from qkfinite.exact import leading_principal_minors
from qkfinite.ineq_verifier import all_types
from qkfinite.root_system import build


def test_single_line_bundle_is_classical():
    for name in ["A1", "A3", "B2", "G2", "F4"]:
        rs = build(name)
        for i in range(1, rs.rank + 1):
            assert admissible_degrees(ProductSpec(rs, (i,))).as_set() == {(0,) * rs.rank}


def test_a1_square():
    ds = admissible_degrees(ProductSpec(build("A1"), (1, 1)))
    assert ds.degrees == ((0,), (1,))
    assert ds.to_json() == {"degrees": [[0], [1]], "objective_values": ["0", "0"], "max_total_degree": 1}


def test_a2_quartic_frozen():
    # box-scan oracle over [0,8]^2, frozen
    ds = admissible_degrees(ProductSpec(build("A2"), (1, 1, 2, 2)))
    assert ds.as_set() == box_scan(ProductSpec(build("A2"), (1, 1, 2, 2)), 8)
    assert len(ds) == 10 and ds.max_total_degree() == 6


@pytest.mark.parametrize("spec", distinct_specs(), ids=lambda s: f"{s.system}{list(s.indices)}")
def test_distinct_indices_collapse(spec):
    assert admissible_degrees(spec).as_set() == {(0,) * spec.system.rank}


def test_sublevel_engine():
    assert enumerate_sublevel([[2]], [2], -1) == [(1,)]
    assert sorted(enumerate_sublevel([[2]], [2], 0)) == [(0,), (1,), (2,)]


spec_strategy = st.sampled_from(all_types(4)).flatmap(lambda t: st.tuples(
    st.just(t), st.lists(st.integers(1, t.rank), min_size=1, max_size=5)))


@given(spec_strategy)
def test_enumerator_matches_box_scan(data):
    t, idx = data
    spec = ProductSpec(build(t), tuple(idx))
    ds = admissible_degrees(spec)
    assert ds.as_set() == box_scan(spec)
    assert all(v >= 0 for v in ds.values)
    assert list(ds.degrees) == sorted(ds.degrees, key=lambda d: (sum(d), d))


@given(spec_strategy)
def test_monotone_in_indices(data):
    t, idx = data
    rs = build(t)
    small = admissible_degrees(ProductSpec(rs, tuple(idx))).as_set()
    big = admissible_degrees(ProductSpec(rs, tuple(idx) + (1,))).as_set()
    assert small <= big


@pytest.mark.parametrize("name", ["A3", "B3", "G2", "F4", "E6"])
def test_eigenvalue_bound_certified(name):
    g = build(name).gram
    t = eigenvalue_lower_bound(g)
    assert t > 0
    shifted = [[g[i][j] - (t if i == j else 0) for j in range(len(g))] for i in range(len(g))]
    assert all(m > 0 for m in leading_principal_minors(shifted))


def test_oracle_box_covers_the_set():
    spec = ProductSpec(build("B3"), (1, 2, 2, 3, 3))
    box = oracle_box(spec)
    assert all(all(x <= b for x, b in zip(d, box)) for d in admissible_degrees(spec).degrees)


def test_variant_validation():
    with pytest.raises(ValueError):
        ProductSpec(build("B2"), (1, 2), Variant.SIMPLY_LACED_DISTINCT)
    with pytest.raises(ValueError):
        ProductSpec(build("A3"), (1, 1), Variant.SIMPLY_LACED_DISTINCT)
    with pytest.raises(ValueError):
        ProductSpec(build("A3"), (4,))


def test_objective_values():
    spec = ProductSpec(build("A2"), (1, 1, 2, 2))
    assert objective(spec, (1, 1)) == 4 - 2 - 1
    sld = ProductSpec(build("A3"), (1, 3), Variant.SIMPLY_LACED_DISTINCT)
    assert objective(sld, (1, 0, 1)) == 2 - 2 - 2
    assert isinstance(objective(spec, (0, 0)), (int, Fraction))


def test_lift_map():
    # toy parabolic lift on A2 with I_P = {2}
    lift = LiftMap.from_pairs([((d, 0), (d, d)) for d in range(6)], parabolic=[2])
    spec = ProductSpec(build("A2"), (1, 1, 1))
    ds = admissible_degrees(spec, lift)
    # objective at (d, d): 3d - 2 - d^2 >= 0 for d in {1, 2}
    assert ds.as_set() == {(0, 0), (1, 0), (2, 0)}
    with pytest.raises(ValueError):
        admissible_degrees(ProductSpec(build("A2"), (2,)), lift)
    with pytest.raises(ValueError):
        LiftMap.from_pairs([((1, 0), (2, 1))], parabolic=[2])
    with pytest.raises(ValueError):
        LiftMap(frozenset([2]))
    with pytest.raises(KeyError, match=r"\[7, 0\]"):
        lift((7, 0))


def test_degree_bound_report():
    rep = degree_bound_report(ProductSpec(build("A2"), (1, 1, 2, 2)))
    assert rep["count"] == 10 and rep["max_total_degree"] == 6


def test_e8_fork_has_nonzero_degree():
    e8 = build("E8")
    w = first_nonzero_admissible(ProductSpec(e8, (4,)))
    assert w is not None and any(w)
    assert objective(ProductSpec(e8, (4,)), w) >= 0
    assert first_nonzero_admissible(ProductSpec(e8, (1,))) is None


@pytest.mark.slow
def test_e8_fork_full_set():
    ds = admissible_degrees(ProductSpec(build("E8"), (4,)))
    assert len(ds) == 199922
    assert ds.degrees[1] == (3, 5, 6, 10, 8, 6, 4, 2)
    assert min(max(d) for d in ds.degrees[1:]) == 10
