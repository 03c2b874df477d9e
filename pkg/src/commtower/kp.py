"""Towers from wave functions.

From an invertible constant-matrix series A(z) the exactly solvable family

    Psi+(t,z) = exp(z diag(t^1..t^N)) A(z),      Psi-(t,z) = Psi+(t,-z)^{-1}

satisfies the wave axioms with W_k = 0, and the alternating sum

    M_{a,b} = sum_{c=0}^{b} (-1)^{b-c} Psi-_{a+b+1-c} Psi+_c

produces a tower satisfying the master equations.  The module also computes
the Lie derivative of that tower along the direction r_l z^l, where the
variation of Psi+ is the graph-preserving one (wave_direction) rather than
plain right multiplication of A(z), with dual numbers and, independently,
by the explicit first-order expansion, and checks that it matches the
direct tower action up to the sign (-1)^(l-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from . import ratmat
from .actions import GPlusElement, act_r
from .series import (DomainError, DualSeries, Series, SeriesMatrix,
                     series_matrix_inverse)
from .tower import Report, Tower, WindowError, window_cells

Mat = ratmat.Mat


@dataclass
class AMatrixSeries:
    """A(z) = A_0 + z A_1 + .. + z^Z A_Z with A_0 invertible over the rationals."""

    m: int
    coefficients: List[Mat]

    def __post_init__(self):
        self.coefficients = [ratmat.as_mat(c) for c in self.coefficients]
        for c in self.coefficients:
            if len(c) != self.m:
                raise DomainError("coefficient size mismatch")
        ratmat.inverse(self.coefficients[0])  # raises DomainError if singular

    @property
    def z_trunc(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def identity(cls, m: int) -> "AMatrixSeries":
        return cls(m, [ratmat.identity(m)])


@dataclass
class WaveFunction:
    """z-power series Psi_0 + z Psi_1 + .. with SeriesMatrix coefficients."""

    sign: str  # "plus" or "minus"
    coefficients: List[SeriesMatrix]

    @property
    def z_trunc(self) -> int:
        return len(self.coefficients) - 1


def _diag_exp_coefficients(m: int, num_vars: int, deg: int, k_max: int, like) -> List[SeriesMatrix]:
    """Coefficients of exp(z diag(t^1..t^m)): diag((t^mu)^i / i!) at z^i."""
    ts = [Series.variable(num_vars, deg, mu) for mu in range(m)]
    if isinstance(like, DualSeries):
        ts = [DualSeries.lift(t) for t in ts]
    powers = [[t.one_like() for t in ts]]
    for _ in range(k_max):
        powers.append([p * t for p, t in zip(powers[-1], ts)])
    out = []
    for i in range(k_max + 1):
        w = Fraction(1, math.factorial(i))
        out.append(SeriesMatrix.diagonal([p.scale(w) for p in powers[i]]))
    return out


def _series_product_coeff(left: List[SeriesMatrix], right: List[SeriesMatrix], k: int) -> SeriesMatrix:
    acc = None
    for i in range(k + 1):
        if i >= len(left) or k - i >= len(right):
            continue
        term = left[i] * right[k - i]
        acc = term if acc is None else acc + term
    if acc is None:
        raise DomainError("empty product coefficient")
    return acc


def _invert_z_series(coeffs: List[SeriesMatrix]) -> List[SeriesMatrix]:
    """H with H(z) G(z) = G(z) H(z) = id at the stored z-truncation."""
    h0 = series_matrix_inverse(coeffs[0])
    out = [h0]
    for k in range(1, len(coeffs)):
        acc = None
        for j in range(1, k + 1):
            term = coeffs[j] * out[k - j]
            acc = term if acc is None else acc + term
        out.append(-(h0 * acc))
    return out


def _entry_matrices(a: AMatrixSeries, num_vars: int, deg: int, k_max: int) -> List[SeriesMatrix]:
    """Constant coefficients of A(z) lifted to Series matrices and padded
    with zeros up to z^k_max."""
    base = [SeriesMatrix.from_const(c, num_vars, deg) for c in a.coefficients]
    zero = SeriesMatrix.zeros(a.m, Series.zero(num_vars, deg))
    return [base[k] if k < len(base) else zero for k in range(k_max + 1)]


def wave_from_a(a: AMatrixSeries, num_vars: int, deg: int, k_max: int
                ) -> Tuple[WaveFunction, WaveFunction]:
    """Build (Psi+, Psi-) up to z^k_max.  Requires num_vars = m."""
    if num_vars != a.m:
        raise DomainError("construction needs one t-variable per matrix row")
    a_coeffs = _entry_matrices(a, num_vars, deg, k_max)
    like = a_coeffs[0].entries[0][0]
    diag = _diag_exp_coefficients(a.m, num_vars, deg, k_max, like)
    psi_plus = [_series_product_coeff(diag, a_coeffs, k) for k in range(k_max + 1)]
    # Psi-(t,z) = Psi+(t,-z)^{-1}
    flipped = [c if k % 2 == 0 else -c for k, c in enumerate(psi_plus)]
    psi_minus = _invert_z_series(flipped)
    return WaveFunction("plus", psi_plus), WaveFunction("minus", psi_minus)


def verify_axioms(psi_plus: WaveFunction, psi_minus: WaveFunction) -> Report:
    """The wave axioms for the W_k = 0 family:

      P1  both are z-power series with invertible constant term at t = 0;
      P2  Psi-(t,-z) Psi+(t,z) = id;
      P3  d_k Psi+ = z E_kk Psi+;
      P4  d_k Psi- = z Psi- E_kk (the form obtained by differentiating P2
          with P3; asserted coefficient-wise).
    """
    report = Report()
    sample = psi_plus.coefficients[0].entries[0][0]
    n = sample.num_vars
    m = psi_plus.coefficients[0].m
    for wf in (psi_plus, psi_minus):
        try:
            ratmat.inverse(wf.coefficients[0].constant_term())
            ok = True
        except DomainError:
            ok = False
        report.record("P1: leading coefficient invertible at 0", wf.sign, ok)
    k_max = min(psi_plus.z_trunc, psi_minus.z_trunc)
    flipped = [c if k % 2 == 0 else -c for k, c in enumerate(psi_minus.coefficients)]
    for k in range(k_max + 1):
        prod = _series_product_coeff(flipped, psi_plus.coefficients, k)
        want = (SeriesMatrix.identity(m, sample) if k == 0
                else SeriesMatrix.zeros(m, sample))
        report.record("P2: Psi-(t,-z) Psi+(t,z) = id", k, prod == want)
    d1 = sample.trunc_degree - 1
    for k in range(n):
        e_kk = [[Fraction(1 if (i == j == k) else 0) for j in range(m)] for i in range(m)]
        for j in range(k_max + 1):
            lhs = psi_plus.coefficients[j].partial(k)
            rhs = (psi_plus.coefficients[j - 1].truncated(d1).left_mul_const(e_kk)
                   if j >= 1 else SeriesMatrix.zeros(m, sample.truncated(d1)))
            report.record("P3: d_k Psi+ = z E_kk Psi+", (k, j), lhs == rhs)
            lhs = psi_minus.coefficients[j].partial(k)
            rhs = (psi_minus.coefficients[j - 1].truncated(d1).right_mul_const(e_kk)
                   if j >= 1 else SeriesMatrix.zeros(m, sample.truncated(d1)))
            report.record("P4: d_k Psi- = z Psi- E_kk", (k, j), lhs == rhs)
    return report


def wave_tower(psi_plus: WaveFunction, psi_minus: WaveFunction, window_b: int) -> Tower:
    """M_{a,b} = sum_{c=0}^{b} (-1)^{b-c} Psi-_{a+b+1-c} Psi+_c."""
    if psi_minus.z_trunc < window_b + 1 or psi_plus.z_trunc < window_b:
        raise WindowError("wave truncation too small for the requested window")
    sample = psi_plus.coefficients[0].entries[0][0]
    m = psi_plus.coefficients[0].m
    entries = {}
    for a, b in window_cells(window_b):
        acc = None
        for c in range(b + 1):
            term = psi_minus.coefficients[a + b + 1 - c] * psi_plus.coefficients[c]
            if (b - c) % 2 == 1:
                term = -term
            acc = term if acc is None else acc + term
        entries[(a, b)] = acc
    if isinstance(sample, DualSeries):
        num_vars, deg = sample.value.num_vars, sample.value.trunc_degree
    else:
        num_vars, deg = sample.num_vars, sample.trunc_degree
    return Tower(m, num_vars, deg, window_b, entries)


def verify_wave_dm00(psi_plus: WaveFunction, psi_minus: WaveFunction, tower: Tower) -> bool:
    """dM_{0,0} = Psi-_0 diag(dt^1..dt^N) Psi+_0, coefficient-wise per dt^k."""
    m00 = tower[(0, 0)]
    n = tower.num_vars
    m = tower.m
    d1 = tower.trunc_degree - 1
    for k in range(n):
        e_kk = [[Fraction(1 if (i == j == k) else 0) for j in range(m)] for i in range(m)]
        lhs = m00.partial(k)
        rhs = (psi_minus.coefficients[0].truncated(d1).right_mul_const(e_kk)
               * psi_plus.coefficients[0].truncated(d1))
        if lhs != rhs:
            return False
    return True


def wave_direction(psi_plus: WaveFunction, psi_minus: WaveFunction,
                   l: int, r_l: Mat, k_max: int) -> List[SeriesMatrix]:
    """The variation of Psi+ along r_l z^l (coefficients 0..k_max):

      delta Psi+_k = Psi+_{l+k} r_l
                     - sum_{i=1..l} sum_{j=0..l-i} (-1)^{l-i-j}
                       Psi+_j r_l Psi-_{l-i-j} Psi+_{i+k}.

    Needs Psi+ stored up to index k_max + l.  In one dimension the inner sum
    telescopes against the leading term (scalars commute, so the pairing of
    Psi+ and Psi- coefficients collapses to the identity) and the variation
    vanishes.
    """
    r_l = ratmat.as_mat(r_l)
    if psi_plus.z_trunc < k_max + l:
        raise WindowError("wave truncation too small for the variation")
    pp = psi_plus.coefficients
    pm = psi_minus.coefficients
    out = []
    for k in range(k_max + 1):
        acc = pp[l + k].right_mul_const(r_l)
        for i in range(1, l + 1):
            for j in range(l - i + 1):
                term = pp[j].right_mul_const(r_l) * pm[l - i - j] * pp[i + k]
                if (l - i - j) % 2 == 1:
                    term = -term
                acc = acc - term
        out.append(acc)
    return out


def wave_lie_derivative(a: AMatrixSeries, l: int, r_l: Mat, window_b: int,
                        deg: int) -> Tower:
    """Derivative of the wave tower along the direction r_l z^l, computed
    with dual numbers: Psi+ is lifted to Psi+ + eps delta(Psi+), Psi- is
    recovered from the dual-number z-series inverse of Psi+(t,-z), and the
    tower formula runs over dual matrices."""
    k_max = window_b + 1
    psi_plus, psi_minus = wave_from_a(a, a.m, deg, k_max + l)
    delta = wave_direction(psi_plus, psi_minus, l, r_l, k_max)
    dual_plus = [psi_plus.coefficients[k].lift_dual(delta[k]) for k in range(k_max + 1)]
    flipped = [c if k % 2 == 0 else -c for k, c in enumerate(dual_plus)]
    dual_minus = _invert_z_series(flipped)
    dual_tower = wave_tower(WaveFunction("plus", dual_plus),
                            WaveFunction("minus", dual_minus), window_b)
    return dual_tower.map_entries(lambda mat: mat.eps_part())


def wave_lie_derivative_expansion(a: AMatrixSeries, l: int, r_l: Mat,
                                  window_b: int, deg: int) -> Tower:
    """Same derivative by the explicit first-order expansion:
    delta Psi- = -Psi- delta(Psi+(t,-z)) Psi- coefficient by coefficient,
    then the product rule in the tower formula.  Shares only the defining
    variation of Psi+ with the dual-number path."""
    r_l = ratmat.as_mat(r_l)
    k_max = window_b + 1
    psi_plus, psi_minus = wave_from_a(a, a.m, deg, k_max + l)
    m = a.m
    zero = SeriesMatrix.zeros(m, Series.zero(a.m, deg))
    d_plus = wave_direction(psi_plus, psi_minus, l, r_l, k_max)
    d_flip = [c if k % 2 == 0 else -c for k, c in enumerate(d_plus)]
    h = psi_minus.coefficients
    d_minus = []
    for k in range(k_max + 1):
        acc = None
        for i in range(k + 1):
            for j in range(k + 1 - i):
                if d_flip[j].is_zero():
                    continue
                term = h[i] * d_flip[j] * h[k - i - j]
                acc = term if acc is None else acc + term
        d_minus.append(zero if acc is None else -acc)
    entries = {}
    for a_idx, b_idx in window_cells(window_b):
        acc = zero
        for c in range(b_idx + 1):
            term = (d_minus[a_idx + b_idx + 1 - c] * psi_plus.coefficients[c]
                    + h[a_idx + b_idx + 1 - c] * d_plus[c])
            if (b_idx - c) % 2 == 1:
                term = -term
            acc = acc + term
        entries[(a_idx, b_idx)] = acc
    return Tower(m, a.m, deg, window_b, entries)


def check_action_sign(a: AMatrixSeries, l: int, r_l: Mat, window_b: int,
                      deg: int) -> bool:
    """The wave-side Lie derivative equals (-1)^(l-1) times the direct tower
    action of r_l z^l, exactly on the common window."""
    derived = wave_lie_derivative(a, l, r_l, window_b, deg)
    psi_plus, psi_minus = wave_from_a(a, a.m, deg, window_b + 1)
    base = wave_tower(psi_plus, psi_minus, window_b)
    element = GPlusElement({l: ratmat.as_mat(r_l)})
    if not element.coeffs:
        return derived.is_zero()
    direct = act_r(base, element)
    if l % 2 == 0:
        direct = direct.map_entries(lambda mat: -mat)
    return derived.equals_on_common_window(direct)
