"""Group and Lie-algebra actions: master-equation preservation, exponential
round trips, bracket relations, J-series transformation, quantized
operators, spectrum invariance."""

from fractions import Fraction

import pytest

from commtower import ratmat
from commtower.actions import (GLElement, GMinusElement, GPlusElement, act_r,
                               act_s, act_s_on_j, bracket_check,
                               check_spectrum_invariance, conjugate,
                               exp_act_r, exp_act_s, gminus_series_exp,
                               gminus_series_log, infinitesimal_act_s_on_j,
                               operator_r_hat, operator_s_hat,
                               s_hat_commutator_check)
from commtower.corpus import (diag_seed, random_gl, random_gminus,
                              random_gplus, random_orbit_tower)
from commtower.rng import SplitMix64
from commtower.tower import (full_potential, j_series, lift_dual_tower,
                             verify_master)


def test_act_r_preserves_master_to_first_order(small_orbit, rng):
    tower, _ = small_orbit
    r = random_gplus(rng, 2, max_l=2)
    out = act_r(tower, r)
    assert out.window_b == tower.window_b - r.max_index
    assert verify_master(lift_dual_tower(tower, out)).passed


def test_act_s_preserves_master_and_dm00(small_orbit, rng):
    tower, _ = small_orbit
    s = random_gminus(rng, 2, max_l=2)
    out = act_s(tower, s)
    assert out.window_b == tower.window_b
    assert verify_master(lift_dual_tower(tower, out)).passed
    # lower-triangular directions fix dM_{0,0}: s.M at (0,0) is constant
    n = tower.num_vars
    for k in range(n):
        assert out[(0, 0)].partial(k).is_zero()


def test_conjugate_preserves_master(small_orbit, rng):
    tower, _ = small_orbit
    p = random_gl(rng, 2)
    assert verify_master(conjugate(tower, p)).passed


def test_exp_round_trips(rng):
    tower = diag_seed(2, 2, 4, 3)
    r = random_gplus(rng, 2, max_l=2)
    s = random_gminus(rng, 2, max_l=2)
    back_r = exp_act_r(exp_act_r(tower, r), r.negated())
    assert back_r.equals_on_common_window(tower)
    back_s = exp_act_s(exp_act_s(tower, s), s.negated())
    assert back_s.equals_on_common_window(tower)
    assert verify_master(exp_act_r(tower, r)).passed
    assert verify_master(exp_act_s(tower, s)).passed


def test_bracket_relations(rng):
    tower, _ = random_orbit_tower(rng, 2, 2, 3, 5, max_l=1)
    for l in (1, 2, 3):
        for m_idx in (1, 2, 3):
            if l + m_idx > 4:
                continue
            r_l = [[Fraction(rng.int_range(-2, 2)) for _ in range(2)] for _ in range(2)]
            r_m = [[Fraction(rng.int_range(-2, 2)) for _ in range(2)] for _ in range(2)]
            assert bracket_check(tower, l, r_l, m_idx, r_m)


def test_gminus_exp_log_round_trip(rng):
    s = random_gminus(rng, 2, max_l=2)
    coeffs = gminus_series_exp(s, 6, 2)
    back = gminus_series_log(coeffs)
    for l, mat in s.coeffs.items():
        assert ratmat.eq(back.coeffs[l], mat)


def test_j_series_transformation(small_orbit, rng):
    tower, _ = small_orbit
    s = random_gminus(rng, 2, max_l=2)
    s_group = gminus_series_exp(s, tower.window_b + 1, 2)
    lhs = act_s_on_j(j_series(tower), s_group)
    rhs = j_series(exp_act_s(tower, s))
    assert lhs == rhs


def test_j_series_infinitesimal_transformation(small_orbit, rng):
    tower, _ = small_orbit
    s = random_gminus(rng, 2, max_l=2)
    lhs = infinitesimal_act_s_on_j(j_series(tower), s)
    rhs = j_series(act_s(tower, s))
    assert lhs == rhs


def test_quantized_r_matches_tower_action(small_orbit, rng):
    tower, _ = small_orbit
    r = random_gplus(rng, 2, max_l=2)
    f = full_potential(tower)
    lhs = operator_r_hat(f, r)
    rhs = full_potential(act_r(tower, r))
    assert lhs.restricted(rhs.window).bilinear_equal(rhs)


def test_quantized_s_matches_tower_action(small_orbit, rng):
    tower, _ = small_orbit
    s = random_gminus(rng, 2, max_l=2)
    f = full_potential(tower)
    lhs = operator_s_hat(f, s)
    rhs = full_potential(act_s(tower, s))
    assert lhs.bilinear_equal(rhs)


def test_s_hat_commutator(small_orbit, rng):
    tower, _ = small_orbit
    f = full_potential(tower)
    for l, m_idx in [(1, 1), (1, 2), (2, 1)]:
        s_l = [[Fraction(rng.int_range(-2, 2)) for _ in range(2)] for _ in range(2)]
        s_m = [[Fraction(rng.int_range(-2, 2)) for _ in range(2)] for _ in range(2)]
        assert s_hat_commutator_check(f, l, s_l, m_idx, s_m)


def test_spectrum_invariance(small_orbit, rng):
    tower, _ = small_orbit
    r = random_gplus(rng, 2, max_l=2)
    assert check_spectrum_invariance(tower, r)


def test_dim1_action_is_trivial():
    from commtower.series import Series
    from commtower.tower import tower_diag_seed
    t = Series.variable(1, 8, 0)
    tower = tower_diag_seed([t], 7)
    for l in (1, 2, 3):
        out = act_r(tower, GPlusElement({l: [[Fraction(1)]]}))
        assert out.is_zero()
