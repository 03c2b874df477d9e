"""Constructive normalization of a tower to the canonical diagonal seed.

Pipeline: conjugate by a GL(V) element diagonalizing the linearization of
M_{0,0} at the origin, kill all constant terms with the lower-triangular
group element built from J(-z), inductively remove the off-diagonal part of
M_{0,0} degree by degree with upper-triangular factors exp(z^l r_l), and
finally straighten coordinates so that M_{0,0} = diag(t^1, .., t^N).  Every
step records a report and the factors are replayable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from . import ratmat
from .actions import (GLElement, GMinusElement, GPlusElement, conjugate,
                      exp_act_r, exp_act_s, gminus_series_log)
from .series import CoordinateMap, DomainError, Series, SeriesMatrix
from .tower import Report, Tower, WindowError, window_cells

Mat = ratmat.Mat


def kill_constants(tower: Tower) -> Tuple[List[Mat], Tower]:
    """Unique lower-triangular group element S with (S.M)_{a,b}(0) = 0.

    S(z) = J(-z) with coefficients read at t = 0: S_k = (-1)^k M_{0,k-1}(0),
    truncated at z^{-(window+1)}.  The vanishing of all constant terms after
    the action is asserted, not assumed.
    """
    m = tower.m
    depth = tower.window_b + 1
    coeffs = [ratmat.identity(m)]
    for b in range(depth):
        c = tower[(0, b)].constant_term()
        coeffs.append(c if b % 2 == 1 else ratmat.neg(c))
    if all(ratmat.is_zero(c) for c in coeffs[1:]):
        return coeffs, tower
    out = exp_act_s(tower, gminus_series_log(coeffs))
    for cell in out.cells():
        if not ratmat.is_zero(out[cell].constant_term()):
            raise AssertionError(f"constant term survived at cell {cell}")
    return coeffs, out


def _closed_form_entry(m00: SeriesMatrix, a: int, b: int,
                       powers: List[SeriesMatrix]) -> SeriesMatrix:
    denom = Fraction(math.factorial(a) * math.factorial(b) * (a + b + 1))
    return powers[a + b + 1].scale(1 / denom)


def check_degree_bounds(tower: Tower, l: int) -> Report:
    """Degree bounds that drive the induction:

      * every M_{a,b} = O(t^{a+b+1});
      * M_{a,b} - M_{0,0}^{a+b+1} / (a! b! (a+b+1)) = O(t^{a+b+l+1}).

    Preconditions (reported, not raised): vanishing constants, and M_{0,0}
    diagonal modulo O(t^{l+1}).
    """
    report = Report()
    ok = all(ratmat.is_zero(tower[cell].constant_term()) for cell in tower.cells())
    report.record("constants vanish", None, ok)
    m00 = tower[(0, 0)]
    ok = True
    for mu in range(tower.m):
        for nu in range(tower.m):
            if mu != nu:
                d = m00.entries[mu][nu].min_degree()
                if d is not None and d < l + 1:
                    ok = False
    report.record(f"M[0,0] diagonal modulo degree {l + 1}", None, ok)
    if not report.passed:
        return report
    powers = [SeriesMatrix.identity(tower.m, m00.entries[0][0])]
    for _ in range(tower.window_b + 1):
        powers.append(powers[-1] * m00)
    for a, b in tower.cells():
        entry = tower[(a, b)]
        low = min((s.min_degree() for row in entry.entries for s in row
                   if s.min_degree() is not None), default=None)
        report.record("M[a,b] = O(t^{a+b+1})", (a, b), low is None or low >= a + b + 1)
        diff = entry - _closed_form_entry(m00, a, b, powers)
        low = min((s.min_degree() for row in diff.entries for s in row
                   if s.min_degree() is not None), default=None)
        cutoff = a + b + l + 1
        report.record("M[a,b] - closed form = O(t^{a+b+l+1})", (a, b),
                      low is None or low >= cutoff)
    return report


def diagonalize_step(tower: Tower, l: int, alphas: List[Series]) -> Tuple[Mat, Tower]:
    """One induction step: remove the degree-(l+1) off-diagonal part of M_{0,0}.

    With M_{0,0} diagonal modulo O(t^{l+1}) and diagonal linear parts
    alpha_mu, the degree-(l+1) off-diagonal entry X_{mu,nu} is an exact
    multiple x of (alpha_mu - alpha_nu)^{l+1}; acting with exp(z^l r_l) for
    (r_l)_{mu,nu} = (-1)^l (l+1)! x cancels it, leaving M_{0,0} diagonal
    modulo O(t^{l+2}).
    """
    m = tower.m
    m00 = tower[(0, 0)]
    r_l = ratmat.zeros(m)
    for mu in range(m):
        for nu in range(m):
            if mu == nu:
                continue
            x_entry = m00.entries[mu][nu].homogeneous_part(l + 1)
            if x_entry.is_zero():
                continue
            divisor = alphas[mu] - alphas[nu]
            if divisor.is_zero():
                raise DomainError(f"eigenvalue forms {mu} and {nu} coincide")
            power = divisor
            for _ in range(l):
                power = power * divisor
            # exact division of two homogeneous degree-(l+1) polynomials
            mono, lead = next(iter(power.terms.items()))
            x = x_entry.coeff(mono) / lead
            if x_entry != power.scale(x):
                raise DomainError(
                    f"off-diagonal entry ({mu},{nu}) is not a multiple of "
                    f"(alpha_{mu} - alpha_{nu})^{l + 1}")
            # acting with z^l r_l adds (alpha_nu - alpha_mu)^{l+1} (r_l)_{mu,nu}
            # / (l+1)! at leading order, so this choice cancels X exactly
            r_l[mu][nu] = Fraction((-1) ** l * math.factorial(l + 1)) * x
    if ratmat.is_zero(r_l):
        return r_l, tower
    out = exp_act_r(tower, GPlusElement({l: r_l}))
    new00 = out[(0, 0)]
    for mu in range(m):
        for nu in range(m):
            if mu != nu:
                d = new00.entries[mu][nu].min_degree()
                if d is not None and d < l + 2:
                    raise AssertionError(
                        f"off-diagonal entry ({mu},{nu}) survived at degree {d}")
    return r_l, out


@dataclass
class NormalizationResult:
    gl: Optional[GLElement]
    s_series: List[Mat]
    r_factors: List[Tuple[int, Mat]]
    coordinate_map: CoordinateMap
    normalized: Tower
    log: Report = field(default_factory=Report)

    @property
    def recovered_canonical_form(self) -> bool:
        return self.log.passed


def _rational_diagonalizer(mats: List[Mat]) -> Mat:
    """P with P^{-1} A_k P diagonal for every A_k, over the rationals.

    The A_k commute (commutativity equation at the origin), so a generic
    rational combination has the joint eigenvectors; several weight vectors
    are tried before giving up.
    """
    m = len(mats[0])
    n = len(mats)
    for attempt in range(1, 8):
        weights = [Fraction(attempt ** k + k) for k in range(n)]
        combo = ratmat.zeros(m)
        for w, a in zip(weights, mats):
            combo = ratmat.add(combo, ratmat.scale(a, w))
        sym = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row]
                            for row in combo])
        try:
            p_sym, d_sym = sym.diagonalize()
        except sympy.matrices.exceptions.MatrixError:
            continue
        if not all(e.is_rational for e in p_sym) or not all(e.is_rational for e in d_sym):
            continue
        p = [[Fraction(int(e.p), int(e.q)) for e in p_sym.row(i)] for i in range(m)]
        p_inv = ratmat.inverse(p)
        if all(_is_diagonal(ratmat.mul(ratmat.mul(p_inv, a), p)) for a in mats):
            return p
    raise DomainError("linearization of M[0,0] is not simultaneously "
                      "diagonalizable over the rationals")


def _is_diagonal(a: Mat) -> bool:
    return all(a[i][j] == 0 for i in range(len(a)) for j in range(len(a)) if i != j)


def apply_factors(tower: Tower, result: NormalizationResult) -> Tower:
    """Replay the recorded factors; must reproduce `normalized` bit-exactly."""
    t = tower
    if result.gl is not None:
        t = conjugate(t, result.gl)
    if any(not ratmat.is_zero(c) for c in result.s_series[1:]):
        t = exp_act_s(t, gminus_series_log(result.s_series))
    for l, r_l in result.r_factors:
        if not ratmat.is_zero(r_l):
            t = exp_act_r(t, GPlusElement({l: r_l}))
    if result.coordinate_map is not None:
        comps = result.coordinate_map.components
        t = t.map_entries(lambda mat: SeriesMatrix(
            [[s.substitute(comps) for s in row] for row in mat.entries]))
    return t


def normalize(tower: Tower, gl: Optional[GLElement] = None) -> NormalizationResult:
    """Full pipeline: GL conjugation, constant killing, inductive
    diagonalization for l = 1 .. D-1, and (when N = m) the coordinate change
    making M_{0,0} = diag(t^1, .., t^N) exactly.

    Requires window >= trunc_degree - 1 so the exponentials stay exact.
    """
    deg = tower.trunc_degree
    n = tower.num_vars
    m = tower.m
    if tower.window_b < deg - 1:
        raise WindowError(f"window {tower.window_b} < trunc_degree - 1 = {deg - 1}")
    log = Report()

    t = tower
    # linearization of M_{0,0} at the origin, one matrix per variable
    lin = [t[(0, 0)].partial(k).constant_term() for k in range(n)]
    if gl is None and not all(_is_diagonal(a) for a in lin):
        gl = GLElement(ratmat.inverse(_rational_diagonalizer(lin)))
    if gl is not None:
        t = conjugate(t, gl)
        lin = [t[(0, 0)].partial(k).constant_term() for k in range(n)]
    log.record("linearization diagonal", None, all(_is_diagonal(a) for a in lin))

    s_series, t = kill_constants(t)
    log.record("constants killed", None,
               all(ratmat.is_zero(t[cell].constant_term()) for cell in t.cells()))

    alphas = []
    for mu in range(m):
        form = Series.zero(n, deg)
        for k in range(n):
            c = lin[k][mu][mu]
            if c:
                form = form + Series.variable(n, deg, k).scale(c)
        alphas.append(form)
    for mu in range(m):
        for nu in range(mu + 1, m):
            if alphas[mu] == alphas[nu]:
                raise DomainError(f"eigenvalue forms {mu} and {nu} coincide")

    r_factors: List[Tuple[int, Mat]] = []
    for l in range(1, deg):
        bounds = check_degree_bounds(t, l)
        log.record(f"degree bounds before step l={l}", None, bounds.passed)
        r_l, t = diagonalize_step(t, l, alphas)
        r_factors.append((l, r_l))
        off_ok = all(t[(0, 0)].entries[mu][nu].is_zero()
                     or t[(0, 0)].entries[mu][nu].min_degree() >= l + 2
                     for mu in range(m) for nu in range(m) if mu != nu)
        log.record(f"off-diagonal O(t^{l + 2}) after step l={l}", None, off_ok)

    coord = CoordinateMap.identity(n, deg)
    if n == m:
        components = [t[(0, 0)].entries[mu][mu] for mu in range(m)]
        forward = CoordinateMap(components)
        coord = forward.inverse()
        t = t.map_entries(lambda mat: SeriesMatrix(
            [[s.substitute(coord.components) for s in row] for row in mat.entries]))
        diag_ok = t[(0, 0)] == SeriesMatrix.diagonal(
            [Series.variable(n, deg, mu) for mu in range(m)])
        log.record("M[0,0] = diag(t^1..t^N)", None, diag_ok)

    m00 = t[(0, 0)]
    powers = [SeriesMatrix.identity(m, m00.entries[0][0])]
    for _ in range(t.window_b + 1):
        powers.append(powers[-1] * m00)
    closed = all(t[(a, b)] == _closed_form_entry(m00, a, b, powers)
                 for a, b in t.cells())
    log.record("tower equals closed form in M[0,0]", None, closed)
    commute = all((t[c1] * t[c2] == t[c2] * t[c1])
                  for c1 in window_cells(t.window_b) for c2 in window_cells(t.window_b))
    log.record("entries pairwise commute", None, commute)

    return NormalizationResult(gl, s_series, r_factors, coord, t, log)
