"""Loop-space factorization is equivalent to the master equations at
truncation: it passes exactly when verify_master passes."""

from commtower.corpus import diag_seed, perturb_entry, random_orbit_tower
from commtower.loopspace import (VPlusVector, check_factorization, mu_apply,
                                 phi_apply, q_functional)
from commtower.tower import verify_master


def test_passes_on_master_towers(small_orbit):
    tower, _ = small_orbit
    assert check_factorization(tower).passed
    assert check_factorization(diag_seed(2, 2, 3, 3)).passed


def test_fails_exactly_when_master_fails(rng):
    tower, _ = random_orbit_tower(rng, 2, 2, 3, 3, max_l=2)
    monos = [(0, 0), (1, 0), (0, 2)]
    for cell in tower.cells():
        for mono in monos:
            bad = perturb_entry(tower, cell, 0, 1, mono=mono)
            assert check_factorization(bad).passed == verify_master(bad).passed


def test_phi_factors_through_q(small_orbit):
    tower, _ = small_orbit
    v = VPlusVector.basis_vector(tower.m, 1, 2, tower.num_vars, tower.trunc_degree)
    q = q_functional(tower, v)
    phi_v = phi_apply(tower, v)
    phi_q = phi_apply(tower, VPlusVector([q]))
    depth = min(phi_v.depth, phi_q.depth)
    assert phi_v.equals_to_depth(phi_q, depth)


def test_mu_depth_bookkeeping(small_orbit):
    tower, _ = small_orbit
    v = VPlusVector.basis_vector(tower.m, 0, 1, tower.num_vars, tower.trunc_degree)
    assert mu_apply(tower, v).depth == tower.window_b
