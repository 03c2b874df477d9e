"""Tower invariants: master equations, commutativity, flat sections,
reconstruction from the first row."""

from fractions import Fraction

import pytest

from commtower.corpus import diag_seed, perturb_entry
from commtower.series import Series
from commtower.tower import (Tower, WindowError, full_potential, j_series,
                             reconstruct_from_first_row, tower_diag_seed,
                             verify_commutativity, verify_flat, verify_master)


def dim1_tower(deg: int, window: int) -> Tower:
    t = Series.variable(1, deg, 0)
    return tower_diag_seed([t], window)


def test_diag_seed_satisfies_everything(small_orbit):
    tower = diag_seed(2, 2, 4, 3)
    assert verify_master(tower).passed
    assert verify_commutativity(tower[(0, 0)])
    assert verify_flat(j_series(tower), tower[(0, 0)])


def test_orbit_tower_satisfies_everything(small_orbit):
    tower, _ = small_orbit
    assert verify_master(tower).passed
    assert verify_commutativity(tower[(0, 0)])
    assert verify_flat(j_series(tower), tower[(0, 0)])


def test_mutations_are_caught(small_orbit):
    tower, _ = small_orbit
    for cell in [(0, 0), (1, 1), (0, 2)]:
        bad = perturb_entry(tower, cell, 0, 1)
        assert not verify_master(bad).passed


def test_window_restriction():
    tower = diag_seed(2, 2, 3, 4)
    small = tower.restricted(2)
    assert small.window_b == 2
    assert verify_master(small).passed
    with pytest.raises(WindowError):
        tower[(3, 2)]


def test_reconstruct_from_first_row(small_orbit):
    tower, _ = small_orbit
    rebuilt = reconstruct_from_first_row(tower)
    assert rebuilt.equals_on_common_window(tower)


def test_dim1_closed_form():
    deg, window = 6, 4
    tower = dim1_tower(deg, window)
    assert verify_master(tower).passed
    j = j_series(tower)
    # flat sections of d - dM/z: J = exp(t/z) coefficient-wise
    import math
    t = Series.variable(1, deg, 0)
    for b in range(window + 1):
        power = Series.one(1, deg)
        for _ in range(b + 1):
            power = power * t
        want = power.scale(Fraction(1, math.factorial(b + 1)))
        assert j.coefficients[b].entries[0][0] == want


def test_full_potential_is_bilinear(small_orbit):
    tower, _ = small_orbit
    f = full_potential(tower)
    for (a, mu, b, nu), s in f.bilinear.items():
        assert s == tower[(a, b)].entries[mu][nu]
