from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from treepotts.certify import IneqFunctions, choose_a
from treepotts.interval import Interval
from treepotts.maps import PottsParams, all_permutations, map_F, perm_act
from treepotts.regions import (
    Membership,
    RegionParams,
    constraint_normals,
    containment_check,
    explicit_slice,
    region_membership,
    region_svg,
    region_vertices,
    simplex_over_approx,
    simplex_under_approx,
    union_membership,
    verify_log_convexity,
    vertex_constraint_check,
    vertices_csv,
)

positive = st.fractions(min_value=Fraction(1, 10), max_value=Fraction(10), max_denominator=30)


def test_membership_frozen_points():
    region = RegionParams(2, 2, 3)
    assert region_membership((1, 1), region) is Membership.INSIDE
    assert region_membership((Fraction(1, 2), 1), region) is Membership.UNDECIDED
    assert region_membership((Fraction(11, 5), 1), region) is Membership.OUTSIDE


def test_constraint_counts():
    assert len(constraint_normals(3)) == 6
    assert len(constraint_normals(4)) == 24


@pytest.mark.parametrize("k,a,b,size", [(3, 2, 2, 7), (4, 3, 2, 15)])
def test_vertex_sets_closed_and_feasible(k, a, b, size):
    region = RegionParams(a, b, k)
    vs = region_vertices(region)
    assert len(vs) == size
    assert vs.is_closed()
    ok, failure = vertex_constraint_check(region)
    assert ok, failure


def test_vertex_check_fails_outside_valid_range():
    region = RegionParams(8, 2, 3)
    assert not region.valid
    ok, _ = vertex_constraint_check(region)
    assert not ok


@given(st.sampled_from([3, 4]).flatmap(
    lambda k: st.tuples(st.just(k), st.tuples(*[positive] * (k - 1)), st.sampled_from(all_permutations(k)))))
def test_membership_is_symmetric(args):
    k, x, sigma = args
    region = RegionParams(Fraction(5, 2), Fraction(2), k)
    assert region_membership(perm_act(sigma, x), region) is region_membership(x, region)


@given(st.tuples(positive, positive))
def test_union_and_intersection_agree_when_decided(x):
    region = RegionParams(Fraction(3), Fraction(2), 3)
    a = region_membership(x, region)
    b = union_membership(x, region)
    if Membership.UNDECIDED not in (a, b):
        assert a is b


@pytest.mark.parametrize("k,a,b", [(3, 2, 2), (3, Fraction(5, 2), 2), (4, 3, 2)])
def test_sampled_convexity(k, a, b):
    report = verify_log_convexity(RegionParams(a, b, k), samples=600, seed=1)
    assert report.ok, report.first_disagreement
    assert report.decided_both > 500


def test_explicit_slices_agree_with_membership():
    region = RegionParams(Fraction(5, 2), Fraction(2), 3)
    sl = explicit_slice(region, "(23)")
    for x in [(Fraction(9, 10), Fraction(3, 2)), (Fraction(1, 2), Fraction(19, 10)), (Fraction(9, 10), 3)]:
        m = sl.contains(x)
        full = region_membership(x, region)
        if Membership.UNDECIDED not in (m, full):
            assert m is full
    with pytest.raises(ValueError):
        explicit_slice(region, "(12)")


def test_simplices_bracket_the_region():
    region = RegionParams(Fraction(5, 2), Fraction(2), 4)
    for v in simplex_under_approx(region):
        assert region_membership(v, region) is not Membership.OUTSIDE
    over = simplex_over_approx(region)
    assert len(over) == 4
    with pytest.raises(ValueError):
        simplex_over_approx(RegionParams(2, Fraction(5, 2), 4))


def _sample_image_inside(source, target, params, pts):
    for x in pts:
        if region_membership(x, source) is Membership.INSIDE:
            y = map_F(x, params)
            assert region_membership(y, target) is not Membership.OUTSIDE


@pytest.mark.parametrize("k,d,w,b", [(3, 2, Fraction(1, 2), Fraction(3, 2)), (3, 3, Fraction(1, 4), Fraction(6, 5)),
                                     (4, 4, Fraction(1, 5), Fraction(5, 4))])
def test_self_map_containment_when_inequality_holds(k, d, w, b):
    fns = IneqFunctions(k, d, w)
    a = choose_a(b, k, d, w)
    # the one-step condition: l(b) < a < u(b), a <= b^2
    assert fns.l(b) < a and fns.u(b).certainly_gt(a) and a <= b * b
    region = RegionParams(a, b, k)
    params = PottsParams(k, d, w)
    res = containment_check(region, region, params)
    assert res.certified, res.reason
    grid = [Fraction(i, 7) for i in range(5, 11)]
    pts = [(x, y) for x in grid for y in grid] if k == 3 else [(x, y, z) for x in grid[::2] for y in grid[::2]
                                                                 for z in grid[::2]]
    _sample_image_inside(region, region, params, pts)


def test_containment_rejects_too_small_target():
    params = PottsParams(3, 3, Fraction(1, 4))
    big = RegionParams(choose_a(Fraction(3, 2), 3, 3, params.w), Fraction(3, 2), 3)
    tiny = RegionParams(choose_a(Fraction(101, 100), 3, 3, params.w), Fraction(101, 100), 3)
    assert not containment_check(big, tiny, params).certified


def test_exports_are_deterministic():
    region = RegionParams(2, 2, 3)
    assert region_svg(region) == region_svg(region)
    assert region_svg(region).startswith("<svg")
    rows = vertices_csv(RegionParams(3, 2, 4)).strip().splitlines()
    assert len(rows) == 16 and rows[0].startswith("index,label")
    with pytest.raises(ValueError):
        region_svg(RegionParams(3, 2, 4))


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        RegionParams(1, 2, 3)
    with pytest.raises(ValueError):
        RegionParams(2, 2, 5)
    assert isinstance(RegionParams(2, 2, 3).logs()[0], Interval)
