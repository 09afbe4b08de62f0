"""Tests for perversities and the intersection complex construction."""

import pytest

from toric_ic.fan import load_fan
from toric_ic.gem import GemComplex, gt_pi_ge, j_shriek_extend, q_point, single_cone_gem
from toric_ic.extalg import ConeAlgebra, free_module
from toric_ic.gmcx import single_term_complex
from toric_ic.ic import (
    InvalidPerversity,
    Perversity,
    build_ic,
    duality_pairing_check,
    support_box,
    verify_conditions,
)


@pytest.fixture(scope="module")
def trivial_fan():
    return load_fan(rank=0, rays=[], maximal_cones=[[]])


# ---------------------------------------------------------------------------
# perversities


def test_presets(p2):
    m = Perversity.middle(p2)
    t = Perversity.top(p2)
    b = Perversity.bottom(p2)
    for c in p2.cones:
        if c.dim == 0:
            continue
        assert m(c.id) == 0
        assert t(c.id) == c.dim - 1
        assert b(c.id) == 1 - c.dim


def test_negation(p2):
    t = Perversity.top(p2)
    n = -t
    assert n.name == "bottom"
    for sid, v in t.values.items():
        assert n(sid) == -v
    assert (-Perversity.middle(p2)).name == "middle"


def test_from_json_name(p2):
    p = Perversity.from_json(p2, {"name": "top"})
    assert p.values == Perversity.top(p2).values
    with pytest.raises(InvalidPerversity):
        Perversity.from_json(p2, {"name": "sideways"})


def test_from_json_by_dimension(p2):
    p = Perversity.from_json(p2, {"by_dimension": {"1": 0, "2": 1}})
    for c in p2.cones:
        if c.dim:
            assert p(c.id) == c.dim - 1
    with pytest.raises(InvalidPerversity):
        Perversity.from_json(p2, {"by_dimension": {"1": 0}})


def test_from_json_by_cone(p1):
    rays0 = sorted(p1.cone(p1.cones_of_dim(1)[0]).ray_ids)
    rays1 = sorted(p1.cone(p1.cones_of_dim(1)[1]).ray_ids)
    p = Perversity.from_json(p1, {"by_cone": [
        {"cone": rays0, "value": 3}, {"cone": rays1, "value": -2}]})
    assert p(p1.cones_of_dim(1)[0]) == 3
    assert p(p1.cones_of_dim(1)[1]) == -2
    with pytest.raises(InvalidPerversity):
        Perversity.from_json(p1, {"by_cone": [{"cone": rays0, "value": 0}]})


def test_json_round_trip(p2):
    for name in ("middle", "top", "bottom"):
        p = Perversity.preset(p2, name)
        assert Perversity.from_json(p2, p.to_json(p2)).values == p.values
    custom = Perversity.from_json(p2, {"by_dimension": {"1": 1, "2": -1}})
    assert Perversity.from_json(p2, custom.to_json(p2)).values == custom.values


# ---------------------------------------------------------------------------
# the builder


def test_trivial_fan_is_a_point(trivial_fan):
    L = build_ic(trivial_fan, Perversity.middle(trivial_fan))
    zid = trivial_fan.zero_cone_id()
    assert L.support() == [zid]
    assert L.component(zid).bidegree_dims() == {(0, 0): 1}


def test_p1_middle_components(p1):
    L = build_ic(p1, Perversity.middle(p1))
    for rid in p1.cones_of_dim(1):
        assert L.component(rid).bidegree_dims() == {(1, 0): 1}


def test_p2_middle_top_cone_degrees(p2):
    L = build_ic(p2, Perversity.middle(p2))
    for sid in p2.cones_of_dim(2):
        dims = L.component(sid).bidegree_dims()
        assert {i for (i, _) in dims} <= {1, 2}
        assert all(1 <= i <= 2 and -2 <= j <= 0 for (i, j) in dims)


def test_order_independence(p2, p1xp1):
    for fan in (p2, p1xp1):
        p = Perversity.middle(fan)
        by_id = build_ic(fan, p)
        alt = q_point(fan)
        for c in sorted(fan.cones, key=lambda c: (c.dim, -c.id)):
            if c.dim == 0:
                continue
            alt = gt_pi_ge(p(c.id) + 1, c.id, j_shriek_extend(alt, c.id))
        for c in fan.cones:
            assert alt.component(c.id).bidegree_dims() == \
                by_id.component(c.id).bidegree_dims()


def test_restriction_compatibility(p2):
    sid = p2.cone_by_rays({0, 1})
    sub = load_fan(rank=2, rays=[[1, 0], [0, 1]], maximal_cones=[[0, 1]])
    big = build_ic(p2, Perversity.middle(p2))
    small = build_ic(sub, Perversity.middle(sub))
    for c in sub.cones:
        other = p2.cone_by_rays(
            {0, 1} if c.dim == 2 else set(c.ray_ids))
        assert small.component(c.id).bidegree_dims() == \
            big.component(other).bidegree_dims()


# ---------------------------------------------------------------------------
# verification


@pytest.mark.parametrize("name", ["middle", "top", "bottom"])
def test_conditions_hold_on_small_corpus(p1, p2, p1xp1, name):
    for fan in (p1, p2, p1xp1):
        p = Perversity.preset(fan, name)
        L = build_ic(fan, p)
        rep = verify_conditions(L, p)
        assert rep.ok, rep.violations[:5]


def test_zero_complex_fails_condition_one(p2):
    L = GemComplex(p2, {}, {})
    rep = verify_conditions(L, Perversity.middle(p2))
    assert not rep.ok
    assert rep.violations[0][0] == "condition1"


def test_skipping_truncation_fails_stalk_condition(p1):
    p = Perversity.middle(p1)
    L = q_point(p1)
    for c in sorted(p1.cones, key=lambda c: (c.dim, c.id)):
        if c.dim == 0:
            continue
        L = j_shriek_extend(L, c.id)  # deliberately no truncation
    rep = verify_conditions(L, p)
    assert not rep.ok
    assert any(tag == "condition2" for tag, *_ in rep.violations)


def test_over_truncation_fails_costalk_condition(p1):
    p = Perversity.middle(p1)
    L = q_point(p1)
    for c in sorted(p1.cones, key=lambda c: (c.dim, c.id)):
        if c.dim == 0:
            continue
        L = gt_pi_ge(p(c.id) + 2, c.id, j_shriek_extend(L, c.id))
    rep = verify_conditions(L, p)
    assert not rep.ok
    assert any(tag == "condition3" for tag, *_ in rep.violations)


@pytest.mark.parametrize("name", ["middle", "top", "bottom"])
def test_support_boxes_small_corpus(p1, p2, p1xp1, name):
    for fan in (p1, p2, p1xp1):
        L = build_ic(fan, Perversity.preset(fan, name))
        rep = support_box(L)
        assert rep.ok, rep.violations[:5]


def test_support_box_catches_out_of_box_component(p2):
    sid = p2.cone_by_rays({0, 1})
    alg = ConeAlgebra(p2, sid)
    L = single_cone_gem(p2, sid, single_term_complex(free_module(alg)))
    rep = support_box(L)
    assert not rep.ok
    assert any(tag == "component-box" for tag, *_ in rep.violations)


def test_trivial_fan_sections_box(trivial_fan):
    L = build_ic(trivial_fan, Perversity.middle(trivial_fan))
    assert support_box(L).ok


# ---------------------------------------------------------------------------
# duality pairing


def test_duality_pairing_middle_self_dual_p1(p1):
    assert duality_pairing_check(p1, Perversity.middle(p1)).ok


def test_duality_pairing_top_bottom_p2(p2):
    assert duality_pairing_check(p2, Perversity.top(p2)).ok
    assert duality_pairing_check(p2, Perversity.bottom(p2)).ok


def test_duality_pairing_trivial_fan(trivial_fan):
    assert duality_pairing_check(trivial_fan, Perversity.middle(trivial_fan)).ok


def test_middle_sections_table_symmetry(p1, p2, p1xp1):
    from toric_ic.cohom import gamma_table
    for fan in (p1, p2, p1xp1):
        r = fan.rank
        t = gamma_table(fan, build_ic(fan, Perversity.middle(fan)))
        assert t == {(r - i, -r - q): v for (i, q), v in t.items()}
