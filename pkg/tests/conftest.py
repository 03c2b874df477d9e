"""Shared helpers for the test suite: deterministic RNG streams, random
series/towers at small desk scale, and a hypothesis profile without a
deadline (exact rational arithmetic has unpredictable per-example cost)."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from commtower.corpus import random_orbit_tower
from commtower.rng import SplitMix64
from commtower.series import Series

settings.register_profile(
    "exact",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


def monomials_up_to(num_vars: int, deg: int):
    """All exponent tuples of total degree <= deg."""
    out = []
    for total in range(deg + 1):
        for c in itertools.product(range(total + 1), repeat=num_vars):
            if sum(c) == total:
                out.append(c)
    return out


def random_series(rng: SplitMix64, num_vars: int, deg: int,
                  zero_constant: bool = False) -> Series:
    terms = {}
    for mono in monomials_up_to(num_vars, deg):
        if zero_constant and sum(mono) == 0:
            continue
        c = Fraction(rng.int_range(-2, 2))
        if c:
            terms[mono] = c
    return Series(num_vars, deg, terms)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return SplitMix64(20260823)


@pytest.fixture
def small_orbit(rng):
    """One random-orbit tower at m = N = 2, D = 3, B = 4."""
    tower, factors = random_orbit_tower(rng, 2, 2, 3, 4, max_l=2)
    return tower, factors
