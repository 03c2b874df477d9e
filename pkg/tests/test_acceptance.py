"""Acceptance gate: ten exact-identity criteria at desk scale
(m, N <= 3, t-degree <= 6 except the dim-1 stress case, window <= 5,
rational arithmetic, zero tolerance).  Each test prints one summary line on
the real stdout so the gate is readable even under output capture.
"""

import math
import time
from fractions import Fraction

from commtower import ratmat
from commtower.actions import (GMinusElement, GPlusElement, act_r, act_s,
                               act_s_on_j, bracket_check,
                               check_spectrum_invariance, conjugate,
                               exp_act_r, exp_act_s, gminus_series_exp,
                               operator_r_hat, operator_s_hat,
                               s_hat_commutator_check)
from commtower.corpus import (diag_seed, perturb_entry, random_gl,
                              random_gminus, random_gplus, random_int_matrix,
                              random_orbit_tower)
from commtower.kp import (AMatrixSeries, check_action_sign, verify_wave_dm00,
                          wave_from_a, wave_tower)
from commtower.loopspace import check_factorization
from commtower.normalize import apply_factors, kill_constants, normalize
from commtower.rng import SplitMix64
from commtower.series import DomainError, Series, SeriesMatrix
from commtower.tower import (Tower, full_potential, j_series, lift_dual_tower,
                             tower_diag_seed, verify_master)


def _report(num: int, name: str, ok: bool, started: float) -> None:
    status = "PASS" if ok else "FAIL"
    line = f"criterion {num:2d} [{name}]: {status} ({time.monotonic() - started:.1f}s)"
    import conftest
    conftest.ACCEPTANCE_LINES.append(line)
    print(line, flush=True)
    assert ok, line


def _rng(tag: int) -> SplitMix64:
    return SplitMix64(0xACCE97 + tag)


def test_criterion_01_dim1_closed_form():
    started = time.monotonic()
    deg, window = 6, 4
    t = Series.variable(1, deg, 0)
    tower = tower_diag_seed([t], window)
    ok = verify_master(tower).passed
    j = j_series(tower)
    for b in range(window + 1):
        power = Series.one(1, deg)
        for _ in range(b + 1):
            power = power * t
        want = power.scale(Fraction(1, math.factorial(b + 1)))
        ok = ok and j.coefficients[b].entries[0][0] == want
    _report(1, "dim-1 closed form and J = exp(t/z)", ok, started)


def test_criterion_02_combinatorial_identity():
    started = time.monotonic()
    # the identity behind dim-1 triviality: the upper-triangular action is
    # the zero map on the one-dimensional tower, checked for every cell with
    # a + b <= 4 and every l <= 5 (75 instances)
    deg, window = 11, 9
    t = Series.variable(1, deg, 0)
    tower = tower_diag_seed([t], window)
    ok = True
    count = 0
    for l in range(1, 6):
        out = act_r(tower, GPlusElement({l: [[Fraction(1)]]}))
        for a, b in out.cells():
            if a + b <= 4:
                count += 1
                ok = ok and out[(a, b)].is_zero()
    ok = ok and count == 75
    _report(2, "combinatorial identity, a+b <= 4, l <= 5", ok, started)


def _mutant_act_r(tower: Tower, l: int, r_l) -> Tower:
    """act_r with the sign of the quadratic term flipped."""
    correct = act_r(tower, GPlusElement({l: r_l}))
    quad = {}
    for a, b in correct.cells():
        acc = SeriesMatrix.zeros(tower.m, Series.zero(tower.num_vars, tower.trunc_degree))
        for i in range(l):
            j = l - 1 - i
            term = tower[(a, i)].right_mul_const(ratmat.as_mat(r_l)) * tower[(j, b)]
            acc = acc + (-term if (i + 1) % 2 == 1 else term)
        quad[(a, b)] = acc
    return Tower(tower.m, tower.num_vars, tower.trunc_degree, correct.window_b,
                 {c: correct[c] - quad[c].scale(2) for c in correct.cells()})


def _mutant_act_s(tower: Tower, l: int, s_l) -> Tower:
    """act_s with the delta term dropped."""
    correct = act_s(tower, GMinusElement({l: s_l}))
    entries = {}
    for a, b in correct.cells():
        e = correct[(a, b)]
        if a + b + 1 == l:
            const = SeriesMatrix.from_const(ratmat.as_mat(s_l),
                                            tower.num_vars, tower.trunc_degree)
            if b % 2 == 1:
                const = -const
            e = e - const
        entries[(a, b)] = e
    return Tower(tower.m, tower.num_vars, tower.trunc_degree, correct.window_b, entries)


def test_criterion_03_master_equation_preservation():
    started = time.monotonic()
    rng = _rng(3)
    ok = True
    mutant_r_caught = mutant_s_caught = False
    for _ in range(50):
        p = random_gl(rng, 2)
        r = random_gplus(rng, 2, max_l=2)
        s = random_gminus(rng, 2, max_l=2)
        stage = conjugate(diag_seed(2, 2, 3, 4), p)
        ok = ok and verify_master(stage).passed
        stage = exp_act_r(stage, r)
        ok = ok and verify_master(stage).passed
        tower = exp_act_s(stage, s)
        ok = ok and verify_master(tower).passed
        # infinitesimal actions preserve the equations to first order
        r2 = random_gplus(rng, 2, max_l=2)
        s2 = random_gminus(rng, 2, max_l=2)
        ok = ok and verify_master(lift_dual_tower(tower, act_r(tower, r2))).passed
        ok = ok and verify_master(lift_dual_tower(tower, act_s(tower, s2))).passed
        ok = ok and verify_master(conjugate(tower, random_gl(rng, 2))).passed
        # single-term mutations of the action formulas must be caught
        l = 1 + rng.below(2)
        r_l = random_int_matrix(rng, 2)
        if not ratmat.is_zero(r_l):
            bad = lift_dual_tower(tower, _mutant_act_r(tower, l, r_l))
            mutant_r_caught = mutant_r_caught or not verify_master(bad).passed
        s_l = random_int_matrix(rng, 2)
        if not ratmat.is_zero(s_l):
            bad = lift_dual_tower(tower, _mutant_act_s(tower, l, s_l))
            mutant_s_caught = mutant_s_caught or not verify_master(bad).passed
    ok = ok and mutant_r_caught and mutant_s_caught
    _report(3, "master equations preserved on 50 random orbits", ok, started)


def test_criterion_04_lie_structure():
    started = time.monotonic()
    rng = _rng(4)
    ok = True
    for trial in range(2):
        tower, _ = random_orbit_tower(rng, 2, 2, 3, 5, max_l=1)
        for l in (1, 2, 3):
            for m_idx in (1, 2, 3):
                if l + m_idx > 4:
                    continue
                r_l = random_int_matrix(rng, 2)
                r_m = random_int_matrix(rng, 2)
                ok = ok and bracket_check(tower, l, r_l, m_idx, r_m)
        f = full_potential(tower.restricted(3))
        for l, m_idx in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            s_l = random_int_matrix(rng, 2)
            s_m = random_int_matrix(rng, 2)
            ok = ok and s_hat_commutator_check(f, l, s_l, m_idx, s_m)
    _report(4, "bracket relations and quantized commutators", ok, started)


def test_criterion_05_j_transformation_and_constants():
    started = time.monotonic()
    rng = _rng(5)
    ok = True
    for _ in range(5):
        tower, _ = random_orbit_tower(rng, 2, 2, 3, 4, max_l=2)
        s = random_gminus(rng, 2, max_l=2)
        s_group = gminus_series_exp(s, tower.window_b + 1, 2)
        ok = ok and act_s_on_j(j_series(tower), s_group) == j_series(exp_act_s(tower, s))
        _, killed = kill_constants(tower)
        for cell in killed.cells():
            ok = ok and ratmat.is_zero(killed[cell].constant_term())
        ok = ok and verify_master(killed).passed
    _report(5, "J-series transformation and constant killing", ok, started)


def test_criterion_06_normalization_round_trip():
    started = time.monotonic()
    rng = _rng(6)
    ok = True
    for _ in range(3):
        tower, _ = random_orbit_tower(rng, 2, 2, 5, 4, max_l=2)
        result = normalize(tower)
        ok = ok and result.recovered_canonical_form
        seed = diag_seed(2, 2, 5, result.normalized.window_b)
        ok = ok and result.normalized.equals_on_common_window(seed)
        ok = ok and apply_factors(tower, result).equals_on_common_window(result.normalized)
    _report(6, "normalization round trip m=N=2, D=5", ok, started)


def test_criterion_07_loopspace_equivalence():
    started = time.monotonic()
    rng = _rng(7)
    ok = True
    for _ in range(3):
        tower, _ = random_orbit_tower(rng, 2, 2, 3, 3, max_l=2)
        ok = ok and check_factorization(tower).passed
    tower, _ = random_orbit_tower(rng, 2, 2, 3, 3, max_l=2)
    for cell in tower.cells():
        for mono in [(0, 0), (1, 0), (0, 2)]:
            bad = perturb_entry(tower, cell, 0, 1, mono=mono)
            master = verify_master(bad).passed
            factor = check_factorization(bad).passed
            ok = ok and (master == factor) and not factor
    _report(7, "loop-space factorization equivalent to master equations", ok, started)


def test_criterion_08_quantization_consistency():
    started = time.monotonic()
    rng = _rng(8)
    ok = True
    for _ in range(5):
        tower, _ = random_orbit_tower(rng, 2, 2, 3, 4, max_l=2)
        f = full_potential(tower)
        r = random_gplus(rng, 2, max_l=2)
        lhs = operator_r_hat(f, r)
        rhs = full_potential(act_r(tower, r))
        ok = ok and lhs.restricted(rhs.window).bilinear_equal(rhs)
        s = random_gminus(rng, 2, max_l=2)
        ok = ok and operator_s_hat(f, s).bilinear_equal(full_potential(act_s(tower, s)))
    _report(8, "quantized operators reproduce the tower actions", ok, started)


def test_criterion_09_wave_function_tower():
    started = time.monotonic()
    rng = _rng(9)
    ok = True
    for _ in range(20):
        while True:
            coeffs = [random_int_matrix(rng, 2) for _ in range(4)]
            try:
                a = AMatrixSeries(2, coeffs)
                break
            except DomainError:
                continue
        pp, pm = wave_from_a(a, 2, 4, 4)
        tower = wave_tower(pp, pm, 3)
        ok = ok and verify_master(tower).passed
        ok = ok and verify_wave_dm00(pp, pm, tower)
        r = random_int_matrix(rng, 2)
        for l in (1, 2, 3):
            ok = ok and check_action_sign(a, l, r, 3, 4)
    _report(9, "wave towers: master equations, dM[0,0], action sign", ok, started)


def test_criterion_10_spectrum_invariance():
    started = time.monotonic()
    rng = _rng(10)
    ok = True
    for _ in range(10):
        tower, _ = random_orbit_tower(rng, 2, 2, 3, 4, max_l=2)
        r = random_gplus(rng, 2, max_l=2)
        ok = ok and check_spectrum_invariance(tower, r)
    _report(10, "spectrum of directional derivatives invariant", ok, started)
