"""Deterministic random corpora: orbit towers and targeted perturbations.

An orbit tower starts from the canonical diagonal seed and applies, in
order, a GL(V) conjugation, an upper-triangular exponential and a
lower-triangular exponential (the exponential of the upper action needs
vanishing constant terms, so it runs before the lower one can introduce
them).  All randomness flows through one SplitMix64 stream, so a seed value
fully determines the corpus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from . import ratmat
from .actions import (GLElement, GMinusElement, GPlusElement, conjugate,
                      exp_act_r, exp_act_s)
from .rng import SplitMix64
from .series import DomainError, Series, SeriesMatrix
from .tower import Tower, tower_diag_seed


def random_int_matrix(rng: SplitMix64, m: int, bound: int = 2) -> ratmat.Mat:
    return [[Fraction(rng.int_range(-bound, bound)) for _ in range(m)] for _ in range(m)]


def random_gl(rng: SplitMix64, m: int) -> GLElement:
    while True:
        mat = random_int_matrix(rng, m)
        try:
            return GLElement(mat)
        except DomainError:
            continue


def random_gplus(rng: SplitMix64, m: int, max_l: int = 2) -> GPlusElement:
    return GPlusElement({l: random_int_matrix(rng, m, 1) for l in range(1, max_l + 1)})


def random_gminus(rng: SplitMix64, m: int, max_l: int = 2) -> GMinusElement:
    return GMinusElement({l: random_int_matrix(rng, m, 1) for l in range(1, max_l + 1)})


@dataclass
class OrbitFactors:
    gl: GLElement
    r: GPlusElement
    s: GMinusElement


def diag_seed(m: int, num_vars: int, deg: int, window_b: int) -> Tower:
    """Canonical seed with d_mu = t^(mu mod N + 1)."""
    diag = [Series.variable(num_vars, deg, mu % num_vars) for mu in range(m)]
    return tower_diag_seed(diag, window_b)


def random_orbit_tower(rng: SplitMix64, m: int, num_vars: int, deg: int,
                       window_b: int, max_l: int = 2,
                       ) -> Tuple[Tower, OrbitFactors]:
    factors = OrbitFactors(random_gl(rng, m), random_gplus(rng, m, max_l),
                           random_gminus(rng, m, max_l))
    tower = conjugate(diag_seed(m, num_vars, deg, window_b), factors.gl)
    if factors.r.coeffs:
        tower = exp_act_r(tower, factors.r)
    if factors.s.coeffs:
        tower = exp_act_s(tower, factors.s)
    return tower, factors


def perturb_entry(tower: Tower, cell: Tuple[int, int], mu: int, nu: int,
                  mono: Optional[Tuple[int, ...]] = None,
                  delta: Fraction = Fraction(1)) -> Tower:
    """Return a copy with one coefficient of one matrix entry shifted by delta."""
    if mono is None:
        mono = (0,) * tower.num_vars
    bump = Series(tower.num_vars, tower.trunc_degree, {tuple(mono): delta})
    entries = dict(tower.entries)
    mat = [list(row) for row in entries[cell].entries]
    mat[mu][nu] = mat[mu][nu] + bump
    entries[cell] = SeriesMatrix(mat)
    return Tower(tower.m, tower.num_vars, tower.trunc_degree, tower.window_b, entries)
