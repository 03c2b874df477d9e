"""Towers of matrix potentials, their verification and generating objects.

A tower stores the triangular window of matrices M_{a,b} for a+b <= B.  The
three master equations bind the window together:

    dM_{a+1,b} = M_{a,0} dM_{0,b}
    dM_{a,b+1} = dM_{a,0} M_{0,b}
    M_{a+1,b} + M_{a,b+1} = M_{a,0} M_{0,b}

Verification reports failures instead of raising; identities are asserted
only within the stored window and within derivative-reduced t-degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from .series import DomainError, Series, SeriesMatrix, ShapeError


class WindowError(ValueError):
    """The stored window a+b <= B is too small for the requested operation."""


def window_cells(bound: int) -> Iterator[Tuple[int, int]]:
    for total in range(bound + 1):
        for a in range(total + 1):
            yield a, total - a


@dataclass
class Tower:
    """Triangular window of m x m series matrices M_{a,b}, a+b <= window_b."""

    m: int
    num_vars: int
    trunc_degree: int
    window_b: int
    entries: Dict[Tuple[int, int], SeriesMatrix]

    def __post_init__(self):
        for cell in window_cells(self.window_b):
            if cell not in self.entries:
                raise ShapeError(f"tower window is incomplete: missing cell {cell}")

    def __getitem__(self, cell: Tuple[int, int]) -> SeriesMatrix:
        try:
            return self.entries[cell]
        except KeyError:
            raise WindowError(f"cell {cell} outside window {self.window_b}") from None

    def cells(self) -> Iterator[Tuple[int, int]]:
        return window_cells(self.window_b)

    def map_entries(self, fn) -> "Tower":
        return Tower(self.m, self.num_vars, self.trunc_degree, self.window_b,
                     {cell: fn(mat) for cell, mat in self.entries.items()})

    def restricted(self, new_b: int) -> "Tower":
        if new_b > self.window_b:
            raise WindowError(f"cannot grow window from {self.window_b} to {new_b}")
        return Tower(self.m, self.num_vars, self.trunc_degree, new_b,
                     {cell: self.entries[cell] for cell in window_cells(new_b)})

    def is_zero(self) -> bool:
        return all(mat.is_zero() for mat in self.entries.values())

    def __add__(self, other: "Tower") -> "Tower":
        b = min(self.window_b, other.window_b)
        return Tower(self.m, self.num_vars, self.trunc_degree, b,
                     {cell: self.entries[cell] + other.entries[cell]
                      for cell in window_cells(b)})

    def equals_on_common_window(self, other: "Tower") -> bool:
        b = min(self.window_b, other.window_b)
        return all(self.entries[cell] == other.entries[cell] for cell in window_cells(b))

    @classmethod
    def zero(cls, m: int, num_vars: int, trunc_degree: int, window_b: int) -> "Tower":
        like = Series.zero(num_vars, trunc_degree)
        z = SeriesMatrix.zeros(m, like)
        return cls(m, num_vars, trunc_degree, window_b,
                   {cell: z for cell in window_cells(window_b)})


def lift_dual_tower(tower: Tower, direction: Tower) -> Tower:
    """tower + eps * direction over dual numbers, on the direction's window.

    Running verify_master on the result asserts the master equations to
    first order along the direction, which is the right statement for the
    infinitesimal actions (their output alone is a tangent vector, not a
    solution of the quadratic equations)."""
    if tower.m != direction.m or tower.num_vars != direction.num_vars:
        raise ShapeError("tower shapes differ")
    entries = {cell: tower[cell].lift_dual(direction[cell])
               for cell in direction.cells()}
    return Tower(tower.m, tower.num_vars, tower.trunc_degree,
                 direction.window_b, entries)


def tower_diag_seed(diag_series: List[Series], window_b: int) -> Tower:
    """Canonical commuting tower with diagonal M_{0,0} = diag(d_1..d_m):
    M_{a,b} = diag(d_mu^{a+b+1} / (a! b! (a+b+1))).

    Each d_mu must vanish at the origin.
    """
    if not diag_series:
        raise DomainError("need at least one diagonal series")
    for d in diag_series:
        diag_series[0]._check(d)
        if d.constant_term() != 0:
            raise DomainError("diagonal seed series must vanish at the origin")
    m = len(diag_series)
    num_vars = diag_series[0].num_vars
    trunc = diag_series[0].trunc_degree
    # powers[mu][k] = d_mu ** k
    powers = [[d.one_like(), d] for d in diag_series]
    for mu in range(m):
        for _ in range(window_b):
            powers[mu].append(powers[mu][-1] * diag_series[mu])
    entries = {}
    for a, b in window_cells(window_b):
        denom = Fraction(math.factorial(a) * math.factorial(b) * (a + b + 1))
        diag = [powers[mu][a + b + 1].scale(Fraction(1, 1) / denom) for mu in range(m)]
        entries[(a, b)] = SeriesMatrix.diagonal(diag)
    return Tower(m, num_vars, trunc, window_b, entries)


@dataclass
class CheckResult:
    name: str
    cell: Tuple[int, int] | None
    ok: bool
    detail: str = ""


@dataclass
class Report:
    checks: List[CheckResult] = field(default_factory=list)

    def record(self, name: str, cell, ok: bool, detail: str = ""):
        self.checks.append(CheckResult(name, cell, ok, detail))

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.ok]


def verify_master(tower: Tower) -> Report:
    """Check all three master equations on every cell of the window."""
    report = Report()
    d1 = tower.trunc_degree - 1
    n = tower.num_vars
    for a, b in window_cells(tower.window_b - 1):
        m_a0 = tower[(a, 0)]
        m_0b = tower[(0, b)]
        # dM_{a+1,b} = M_{a,0} dM_{0,b}
        ok = all(tower[(a + 1, b)].partial(k) == m_a0.truncated(d1) * m_0b.partial(k)
                 for k in range(n))
        report.record("dM[a+1,b] = M[a,0] dM[0,b]", (a, b), ok)
        # dM_{a,b+1} = dM_{a,0} M_{0,b}
        ok = all(tower[(a, b + 1)].partial(k) == m_a0.partial(k) * m_0b.truncated(d1)
                 for k in range(n))
        report.record("dM[a,b+1] = dM[a,0] M[0,b]", (a, b), ok)
        # M_{a+1,b} + M_{a,b+1} = M_{a,0} M_{0,b}
        ok = tower[(a + 1, b)] + tower[(a, b + 1)] == m_a0 * m_0b
        report.record("M[a+1,b] + M[a,b+1] = M[a,0] M[0,b]", (a, b), ok)
    return report


def verify_commutativity(m00: SeriesMatrix) -> bool:
    """dM ^ dM = 0: all partial-derivative matrices commute pairwise."""
    sample = m00.entries[0][0]
    n = sample.num_vars
    partials = [m00.partial(k) for k in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if partials[i] * partials[j] != partials[j] * partials[i]:
                return False
    return True


@dataclass
class JSeries:
    """Coefficients [M_{0,0}, .., M_{0,B}] of J(z) = I + sum M_{0,b} z^{-(b+1)}."""

    m: int
    coefficients: List[SeriesMatrix]

    @property
    def bound(self) -> int:
        return len(self.coefficients) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, JSeries):
            return NotImplemented
        return self.m == other.m and self.coefficients == other.coefficients


def j_series(tower: Tower) -> JSeries:
    return JSeries(tower.m, [tower[(0, b)] for b in range(tower.window_b + 1)])


def verify_flat(j: JSeries, m00: SeriesMatrix) -> bool:
    """Coefficient-wise content of nabla_z J = 0 for nabla_z = d - dM/z:
    dM_{0,b+1} = dM_{0,0} M_{0,b}, plus the z^-1 coefficient which pins the
    leading term to the given M_{0,0}."""
    if j.coefficients[0] != m00:
        return False
    sample = m00.entries[0][0]
    d1 = sample.trunc_degree - 1
    n = sample.num_vars
    for b in range(j.bound):
        for k in range(n):
            lhs = j.coefficients[b + 1].partial(k)
            rhs = m00.partial(k) * j.coefficients[b].truncated(d1)
            if lhs != rhs:
                return False
    return True


@dataclass
class PQPolynomial:
    """Polynomial of degree <= 2 in formal p_{a,mu}, q_b^nu variables with
    Series coefficients: a bilinear part indexed by (a, mu, b, nu) plus a
    p,q-free Series part."""

    window: int
    bilinear: Dict[Tuple[int, int, int, int], Series]
    const: Series

    def coeff(self, a: int, mu: int, b: int, nu: int) -> Series:
        return self.bilinear.get((a, mu, b, nu), self.const.zero_like())

    def restricted(self, new_window: int) -> "PQPolynomial":
        if new_window > self.window:
            raise WindowError("cannot grow a PQ window")
        bil = {key: s for key, s in self.bilinear.items()
               if key[0] + key[2] <= new_window}
        return PQPolynomial(new_window, bil, self.const)

    def _pruned(self) -> Dict[Tuple[int, int, int, int], Series]:
        return {k: v for k, v in self.bilinear.items() if not v.is_zero()}

    def __add__(self, other: "PQPolynomial") -> "PQPolynomial":
        w = min(self.window, other.window)
        bil = dict(self.restricted(w).bilinear)
        for key, s in other.restricted(w).bilinear.items():
            bil[key] = bil[key] + s if key in bil else s
        return PQPolynomial(w, bil, self.const + other.const)

    def __sub__(self, other: "PQPolynomial") -> "PQPolynomial":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "PQPolynomial":
        return PQPolynomial(self.window,
                            {k: v.scale(c) for k, v in self.bilinear.items()},
                            self.const.scale(c))

    def bilinear_equal(self, other: "PQPolynomial") -> bool:
        """Compare bilinear parts on the common window, ignoring const."""
        w = min(self.window, other.window)
        return self.restricted(w)._pruned() == other.restricted(w)._pruned()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PQPolynomial):
            return NotImplemented
        return (self.window == other.window and self.const == other.const
                and self._pruned() == other._pruned())

    def is_zero(self) -> bool:
        return self.const.is_zero() and all(v.is_zero() for v in self.bilinear.values())


def full_potential(tower: Tower) -> PQPolynomial:
    """F(p,q,t) = sum M_{a,b}(t) p_a q_b over the stored window."""
    bil = {}
    for (a, b), mat in tower.entries.items():
        for mu in range(tower.m):
            for nu in range(tower.m):
                s = mat.entries[mu][nu]
                if not s.is_zero():
                    bil[(a, mu, b, nu)] = s
    zero = Series.zero(tower.num_vars, tower.trunc_degree)
    return PQPolynomial(tower.window_b, bil, zero)


def reconstruct_from_first_row(tower: Tower) -> Tower:
    """Rebuild the window from the first row via
    M_{a+1,b} = M_{a,0} M_{0,b} - M_{a,b+1}; on master-equation towers this
    reproduces the stored entries."""
    entries: Dict[Tuple[int, int], SeriesMatrix] = {}
    for b in range(tower.window_b + 1):
        entries[(0, b)] = tower[(0, b)]
    for a in range(tower.window_b):
        for b in range(tower.window_b - a):
            entries[(a + 1, b)] = entries[(a, 0)] * entries[(0, b)] - entries[(a, b + 1)]
    return Tower(tower.m, tower.num_vars, tower.trunc_degree, tower.window_b, entries)
