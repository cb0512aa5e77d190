from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from treepotts.interval import Interval
from treepotts.maps import (
    IterationVerdict,
    Permutation,
    PottsParams,
    all_permutations,
    base_case_ratios,
    hat_plain_convert,
    in_sector,
    iterate_F,
    map_F,
    map_G,
    mu,
    parse_rational,
    perm_act,
    preset_point,
    sector_of,
    tree_recursion_step,
)

positive = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(20), max_denominator=40)


def points(k):
    return st.tuples(*[positive] * (k - 1))


def test_parse_rational_refuses_floats():
    assert parse_rational("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        parse_rational(0.5)


def test_params_validation_and_threshold():
    assert PottsParams(4, 4, Fraction(1, 5)).w_c == Fraction(1, 5)
    assert PottsParams(3, 2, Fraction(1, 2)).w_c == 0
    for bad in ((5, 3, Fraction(1, 2)), (3, 1, Fraction(1, 2)), (3, 2, Fraction(0)), (3, 2, Fraction(1))):
        with pytest.raises(ValueError):
            PottsParams(*bad)


def test_G_frozen_value():
    params = PottsParams(3, 2, Fraction(1, 2))
    # mu_1 = -1/2*4 + 6 = 4, mu_3 = -1/2 + 6 = 11/2
    assert map_G((Fraction(4), Fraction(1)), params) == (Fraction(8, 11), Fraction(1))


@given(points(4))
def test_G_matches_mu_quotients(x):
    params = PottsParams(4, 3, Fraction(1, 4))
    full = list(x) + [Fraction(1)]
    expected = tuple(mu(i, full, params) / mu(4, full, params) for i in range(1, 4))
    assert map_G(x, params) == expected


def test_permutation_conventions():
    sigma = Permutation.parse(4, "(243)")
    assert (sigma(2), sigma(4), sigma(3)) == (4, 3, 2)
    assert str(sigma) == "(243)"
    assert perm_act(Permutation.parse(3, "(13)"), (Fraction(2), Fraction(3))) == (Fraction(1, 2), Fraction(3, 2))
    assert perm_act(Permutation.parse(4, "(13)(24)"), (Fraction(2), Fraction(3), Fraction(5))) == (
        Fraction(5, 3), Fraction(1, 3), Fraction(2, 3))


@given(points(3), st.sampled_from(all_permutations(3)), st.sampled_from(all_permutations(3)))
def test_action_is_a_group_action(x, s, t):
    assert perm_act(s, perm_act(t, x)) == perm_act(s.compose(t), x)


@given(st.sampled_from([3, 4]).flatmap(lambda k: st.tuples(st.just(k), points(k), st.sampled_from(all_permutations(k)))))
def test_F_commutes_with_relabelling(args):
    k, x, sigma = args
    params = PottsParams(k, 3, Fraction(1, 3))
    assert map_F(perm_act(sigma, x), params) == perm_act(sigma, map_F(x, params))


@given(points(4))
def test_sector_of_orders_point(x):
    assert in_sector(x, sector_of(x))


def test_base_cases_and_recursion_step():
    params = PottsParams(3, 2, Fraction(1, 2))
    assert base_case_ratios(3, params) == (Fraction(2), Fraction(2))
    assert base_case_ratios(1, params) == (Fraction(1, 2), Fraction(1))
    kids = [base_case_ratios(1, params), base_case_ratios(3, params)]
    prod = (Fraction(1), Fraction(2))
    assert tree_recursion_step(kids, params) == map_G(prod, params)


@given(points(3))
def test_hat_plain_round_trip(x):
    params = PottsParams(3, 2, Fraction(1, 2))
    plain = hat_plain_convert(x, "hat_to_plain", params)
    assert plain == tuple(v**2 for v in x)
    assert hat_plain_convert(plain, "plain_to_hat_inverse", params) == map_G(plain, params)


def test_interval_and_exact_evaluation_agree():
    params = PottsParams(4, 4, Fraction(1, 5))
    x = (Fraction(3, 2), Fraction(1, 3), Fraction(7, 5))
    exact = map_F(x, params)
    enclosed = map_F(tuple(Interval.from_value(v, 128) for v in x), params)
    assert all(iv.contains(e) for iv, e in zip(enclosed, exact))


def test_presets():
    params = PottsParams(4, 4, Fraction(1, 5))
    assert preset_point("corner", params) == (Fraction(5),) * 3
    assert preset_point("spike-1", params) == (Fraction(1, 5), Fraction(1), Fraction(1))
    with pytest.raises(ValueError):
        preset_point("spike-4", params)
    with pytest.raises(ValueError):
        preset_point("nowhere", params)


def test_iteration_converges_above_threshold():
    trace = iterate_F(preset_point("corner", PottsParams(3, 2, Fraction(1, 2))), PottsParams(3, 2, Fraction(1, 2)),
                      max_steps=200)
    assert trace.verdict is IterationVerdict.CONVERGED
    assert trace.final_distance < 1e-9


def test_iteration_cycles_below_threshold():
    params = PottsParams(4, 4, Fraction(1, 10))
    trace = iterate_F(preset_point("corner", params), params, max_steps=500, tol=Fraction(1, 10**6))
    assert trace.verdict is IterationVerdict.CYCLING
    assert trace.cycle_length == 2
