"""Linear-algebra characterization of the master equations on the loop space.

Vectors live in V tensored with Laurent series in z: polynomial vectors
(V-plus) map through mu into the principal part (V-minus), written in the
alternating basis (-z)^{-a-1}.  The map phi lifts a polynomial vector
onto the graph of mu, multiplies by z^{-1} and projects back to V-minus
along the graph.  On towers satisfying the master equations phi factors
through the single vector Q = q_0 + sum_i M_{0,i} q_{i+1}; the converse
failure of that factorization detects master-equation violations, which
check_factorization exercises in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .series import Series, SeriesMatrix, ShapeError
from .tower import Report, Tower, WindowError

Vec = List[Series]


def _mat_vec(mat: SeriesMatrix, vec: Vec) -> Vec:
    if mat.m != len(vec):
        raise ShapeError("matrix/vector size mismatch")
    out = []
    for i in range(mat.m):
        acc = mat.entries[i][0] * vec[0]
        for k in range(1, mat.m):
            acc = acc + mat.entries[i][k] * vec[k]
        out.append(acc)
    return out


def _vec_add(a: Vec, b: Vec) -> Vec:
    return [x + y for x, y in zip(a, b)]


def _vec_neg(a: Vec) -> Vec:
    return [-x for x in a]


def _vec_is_zero(a: Vec) -> bool:
    return all(x.is_zero() for x in a)


@dataclass
class VPlusVector:
    """Polynomial vector q_0 + q_1 z + .. + q_K z^K with Series entries."""

    coefficients: List[Vec]

    def __post_init__(self):
        if not self.coefficients:
            raise ShapeError("need at least the z^0 coefficient")
        m = len(self.coefficients[0])
        for vec in self.coefficients:
            if len(vec) != m:
                raise ShapeError("coefficients must share one length")

    @property
    def m(self) -> int:
        return len(self.coefficients[0])

    @property
    def z_degree(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def basis_vector(cls, m: int, mu: int, i: int, num_vars: int, deg: int) -> "VPlusVector":
        """e_mu z^i."""
        zero = Series.zero(num_vars, deg)
        one = Series.one(num_vars, deg)
        coeffs = [[zero] * m for _ in range(i + 1)]
        coeffs[i] = [one if k == mu else zero for k in range(m)]
        return cls(coeffs)


@dataclass
class VMinusVector:
    """Principal-part vector sum_a c_a (-z)^{-a-1}, truncated at the stored depth."""

    coefficients: List[Vec]  # coefficients[a] multiplies (-z)^{-a-1}

    @property
    def depth(self) -> int:
        return len(self.coefficients)

    def plain(self, k: int) -> Vec:
        """Coefficient of z^{-k-1} in ordinary powers of z:
        (-z)^{-k-1} = (-1)^{k+1} z^{-k-1}."""
        c = self.coefficients[k]
        return _vec_neg(c) if k % 2 == 0 else c

    def __eq__(self, other) -> bool:
        if not isinstance(other, VMinusVector):
            return NotImplemented
        return self.coefficients == other.coefficients

    def equals_to_depth(self, other: "VMinusVector", depth: int) -> bool:
        return self.coefficients[:depth] == other.coefficients[:depth]

    def is_zero(self) -> bool:
        return all(_vec_is_zero(c) for c in self.coefficients)


def mu_apply(tower: Tower, v: VPlusVector) -> VMinusVector:
    """mu(v) = sum_a (-z)^{-a-1} sum_i M_{a,i} q_i, depth window_b - K + 1."""
    k_deg = v.z_degree
    if k_deg > tower.window_b:
        raise WindowError(f"z-degree {k_deg} exceeds window {tower.window_b}")
    if v.m != tower.m:
        raise ShapeError("vector length must match the tower size")
    out = []
    for a in range(tower.window_b - k_deg + 1):
        acc: Optional[Vec] = None
        for i, q in enumerate(v.coefficients):
            term = _mat_vec(tower[(a, i)], q)
            acc = term if acc is None else _vec_add(acc, term)
        out.append(acc)
    return VMinusVector(out)


def q_functional(tower: Tower, v: VPlusVector) -> Vec:
    """Q(v) = q_0 + sum_i M_{0,i} q_{i+1}."""
    if v.z_degree - 1 > tower.window_b:
        raise WindowError("z-degree exceeds window + 1")
    if v.m != tower.m:
        raise ShapeError("vector length must match the tower size")
    acc = list(v.coefficients[0])
    for i in range(1, len(v.coefficients)):
        acc = _vec_add(acc, _mat_vec(tower[(0, i - 1)], v.coefficients[i]))
    return acc


def _shift_down(v: VPlusVector, zero: Series) -> VPlusVector:
    """Polynomial part of z^{-1} v: coefficients q_1, q_2, .."""
    if v.z_degree == 0:
        return VPlusVector([[zero] * v.m])
    return VPlusVector(v.coefficients[1:])


def phi_apply(tower: Tower, v: VPlusVector) -> VMinusVector:
    """phi(v): lift v onto the graph of mu, multiply by z^{-1}, project to
    V-minus along the graph.

    Writing w = z^{-1}(v + mu(v)) = w_plus + w_minus, the projection along
    the graph is w_minus - mu(w_plus): subtracting the graph point of w_plus
    leaves a pure principal part.  Here w_plus is v shifted down one z-degree
    and w_minus collects q_0 z^{-1} plus the shifted mu(v).
    """
    zero = Series.zero(tower.num_vars, tower.trunc_degree)
    mu_v = mu_apply(tower, v)                       # depth B - K + 1
    w_plus = _shift_down(v, zero)
    mu_shift = mu_apply(tower, w_plus)              # depth >= B - K + 1
    depth = mu_v.depth                               # output depth B - K + 1 (+1 leading)
    # plain z^{-k} coefficients c_k of phi(v):
    #   c_1 = q_0 + (z^{-1} mu(v) has no z^{-1} part) - mu(w_plus) z^{-1} part
    #   c_{a+2} = (plain z^{-a-2} of z^{-1} mu(v)) - (plain of mu(w_plus))
    plain = [None] * (depth + 1)
    plain[0] = _vec_add(v.coefficients[0], _vec_neg(mu_shift.plain(0)))
    for a in range(depth):
        shifted = mu_v.plain(a)                      # z^{-1} * z^{-a-1} -> z^{-a-2}
        val = shifted
        if a + 1 < mu_shift.depth:
            val = _vec_add(val, _vec_neg(mu_shift.plain(a + 1)))
        plain[a + 1] = val
    # convert plain z^{-k-1} coefficients to the (-z)^{-k-1} basis
    coeffs = [_vec_neg(c) if k % 2 == 0 else c for k, c in enumerate(plain)]
    return VMinusVector(coeffs)


def check_factorization(tower: Tower) -> Report:
    """Both halves of the loop-space characterization, on the spanning set
    e_nu z^i (i <= window):

      1. phi(v) coincides with phi of the z-degree-0 vector Q(v);
      2. the plain z^{-a-2} coefficient of phi(v) is (-1)^{a+1} M_{a,0} Q(v);
      3. the t-derivative of mu(v) has coefficients dM_{a,0} Q(v).

    On master-equation towers all three hold; a violation of the algebraic
    equation breaks 1/2 and a violation of the differential one breaks 3.
    """
    report = Report()
    n = tower.num_vars
    deg = tower.trunc_degree
    m = tower.m
    for i in range(tower.window_b + 1):
        for nu in range(m):
            v = VPlusVector.basis_vector(m, nu, i, n, deg)
            q = q_functional(tower, v)
            q_lift = VPlusVector([q])
            phi_v = phi_apply(tower, v)
            phi_q = phi_apply(tower, q_lift)
            depth = min(phi_v.depth, phi_q.depth)
            report.record("phi factors through Q", (i, nu),
                          phi_v.equals_to_depth(phi_q, depth))
            ok = _vec_is_zero([x - y for x, y in zip(phi_v.plain(0), q)])
            for a in range(phi_v.depth - 1):
                pattern = _mat_vec(tower[(a, 0)], q)
                got = phi_v.plain(a + 1)
                want = pattern if a % 2 == 1 else _vec_neg(pattern)
                ok = ok and _vec_is_zero([x - y for x, y in zip(got, want)])
            report.record("phi coefficient pattern M[a,0] Q", (i, nu), ok)
            # basis vectors have constant entries, so d(mu coefficient a) is
            # sum_i dM_{a,i} q_i; the factorized form is dM_{a,0} Q with Q
            # entering undifferentiated.
            mu_v = mu_apply(tower, v)
            q_trunc = [x.truncated(deg - 1) for x in q]
            ok = True
            for k in range(n):
                for a in range(mu_v.depth):
                    lhs = [x.partial(k) for x in mu_v.coefficients[a]]
                    rhs = _mat_vec(tower[(a, 0)].partial(k), q_trunc)
                    if any(x != y for x, y in zip(lhs, rhs)):
                        ok = False
            report.record("d mu factors as dM[a,0] Q", (i, nu), ok)
    return report
