"""Wave-function towers and the Lie-derivative sign relation."""

from fractions import Fraction

import pytest

from commtower.corpus import diag_seed, random_int_matrix
from commtower.kp import (AMatrixSeries, check_action_sign, verify_axioms,
                          verify_wave_dm00, wave_from_a, wave_lie_derivative,
                          wave_lie_derivative_expansion, wave_tower)
from commtower.series import DomainError
from commtower.tower import verify_master


def random_a(rng, m: int, z_trunc: int) -> AMatrixSeries:
    while True:
        coeffs = [random_int_matrix(rng, m) for _ in range(z_trunc + 1)]
        try:
            return AMatrixSeries(m, coeffs)
        except DomainError:
            continue


def test_identity_a_reproduces_diag_seed():
    a = AMatrixSeries.identity(2)
    pp, pm = wave_from_a(a, 2, 4, 4)
    tower = wave_tower(pp, pm, 3)
    assert tower.equals_on_common_window(diag_seed(2, 2, 4, 3))


def test_axioms_and_master(rng):
    a = random_a(rng, 2, 3)
    pp, pm = wave_from_a(a, 2, 4, 4)
    assert verify_axioms(pp, pm).passed
    tower = wave_tower(pp, pm, 3)
    assert verify_master(tower).passed
    assert verify_wave_dm00(pp, pm, tower)


def test_singular_leading_coefficient_rejected():
    with pytest.raises(DomainError):
        AMatrixSeries(2, [[[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]])


def test_dim1_derivative_vanishes():
    a = AMatrixSeries(1, [[[Fraction(1)]], [[Fraction(2)]], [[Fraction(-1)]]])
    for l in (1, 2):
        assert wave_lie_derivative(a, l, [[Fraction(3)]], 3, 4).is_zero()


def test_derivative_paths_agree(rng):
    a = random_a(rng, 2, 3)
    r = random_int_matrix(rng, 2)
    for l in (1, 2):
        dual = wave_lie_derivative(a, l, r, 3, 4)
        expanded = wave_lie_derivative_expansion(a, l, r, 3, 4)
        assert dual.equals_on_common_window(expanded)


def test_action_sign(rng):
    a = random_a(rng, 2, 3)
    r = random_int_matrix(rng, 2)
    for l in (1, 2, 3):
        assert check_action_sign(a, l, r, 3, 4)
