"""Ring axioms and calculus rules for the truncated series core."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from commtower.series import (CoordinateMap, DomainError, DualSeries, Series,
                              SeriesMatrix, ShapeError, series_matrix_inverse)

from conftest import monomials_up_to

N_VARS = 2
DEG = 4

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def series(draw, zero_constant=False):
    terms = {}
    for mono in monomials_up_to(N_VARS, DEG):
        if zero_constant and sum(mono) == 0:
            continue
        c = draw(fractions)
        if c:
            terms[mono] = c
    return Series(N_VARS, DEG, terms)


@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + f.zero_like() == f
    assert f * f.one_like() == f
    assert (f - f).is_zero()


@given(series(), series(), st.integers(min_value=0, max_value=DEG))
def test_truncation_is_a_ring_map(f, g, d):
    assert (f * g).truncated(d) == f.truncated(d) * g.truncated(d)
    assert (f + g).truncated(d) == f.truncated(d) + g.truncated(d)


@given(series(), series(), st.integers(min_value=0, max_value=N_VARS - 1))
def test_leibniz_rule(f, g, k):
    # partial drops the truncation degree by one, so compare at DEG - 1
    lhs = (f * g).partial(k)
    rhs = f.partial(k) * g.truncated(DEG - 1) + f.truncated(DEG - 1) * g.partial(k)
    assert lhs == rhs


@given(series())
def test_homogeneous_parts_sum_to_series(f):
    acc = f.zero_like()
    for d in range(DEG + 1):
        acc = acc + f.homogeneous_part(d)
    assert acc == f


def test_substitute_requires_zero_constant_term():
    f = Series.variable(N_VARS, DEG, 0)
    bad = Series.one(N_VARS, DEG)
    with pytest.raises(DomainError):
        f.substitute([bad, bad])


@given(series(zero_constant=True), series(zero_constant=True))
def test_substitution_is_multiplicative(u, v):
    f = Series.variable(N_VARS, DEG, 0) * Series.variable(N_VARS, DEG, 1)
    assert f.substitute([u, v]) == (u * v).truncated(DEG)


@given(series(), series(), series())
def test_dual_numbers_square_to_zero(a, b, c):
    x = DualSeries(a, b)
    y = DualSeries(c, b)
    prod = x * y
    assert prod.value == a * c
    assert prod.epsilon == a * b + b * c


@given(series(), series(), st.integers(min_value=0, max_value=N_VARS - 1))
def test_dual_directional_derivative(f, v, k):
    # eps part of f(x) * (g + eps v) reproduces the product rule slot
    g = DualSeries(f, v)
    sq = g * g
    assert sq.epsilon == (f * v).scale(2)
    assert sq.value == f * f


def test_matrix_inverse_round_trip(rng):
    from conftest import random_series
    while True:
        entries = [[random_series(rng, N_VARS, DEG) for _ in range(2)] for _ in range(2)]
        mat = SeriesMatrix(entries)
        try:
            inv = series_matrix_inverse(mat)
            break
        except DomainError:
            continue
    ident = SeriesMatrix.identity(2, entries[0][0])
    assert mat * inv == ident
    assert inv * mat == ident


def test_coordinate_map_inverse_round_trip(rng):
    from conftest import random_series
    while True:
        comps = []
        for k in range(N_VARS):
            s = random_series(rng, N_VARS, DEG, zero_constant=True)
            comps.append(s + Series.variable(N_VARS, DEG, k))
        cmap = CoordinateMap(comps)
        try:
            inv = cmap.inverse()
            break
        except DomainError:
            continue
    both = cmap.compose(inv)
    for k, comp in enumerate(both.components):
        assert comp == Series.variable(N_VARS, DEG, k)


def test_shape_mismatch_raises():
    f = Series.one(2, 3)
    g = Series.one(3, 3)
    with pytest.raises(ShapeError):
        f + g
