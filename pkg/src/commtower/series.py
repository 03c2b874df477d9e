"""Exact truncated multivariate power series over the rationals.

Everything downstream (towers, group actions, wave functions) is built on
the types in this module: sparse ``Series`` in variables t^1..t^N truncated
at a total degree D, square matrices of such series, dual numbers for exact
first derivatives, and formal coordinate changes with their inverses.

All values are immutable after construction and every operation is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

Monomial = Tuple[int, ...]


class ShapeError(ValueError):
    """Operands disagree on variable count, truncation degree or size."""


class DomainError(ValueError):
    """Input violates a mathematical precondition (not a shape mismatch)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected rational scalar, got {type(x).__name__}")


def grlex_key(mono: Monomial):
    """Graded-lex sort key used for deterministic serialization."""
    return (sum(mono), mono)


class Series:
    """Sparse multivariate power series, truncated at total degree ``trunc_degree``.

    Invariants: every stored monomial has total degree <= trunc_degree and a
    nonzero rational coefficient.
    """

    __slots__ = ("num_vars", "trunc_degree", "terms")

    def __init__(self, num_vars: int, trunc_degree: int, terms: Dict[Monomial, Fraction] | None = None):
        if num_vars < 1:
            raise DomainError("need at least one variable")
        if trunc_degree < 0:
            raise DomainError("truncation degree must be >= 0")
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != num_vars:
                    raise ShapeError(f"monomial {mono} has wrong length for {num_vars} variables")
                if sum(mono) > trunc_degree:
                    continue
                c = _frac(c)
                if c != 0:
                    clean[tuple(mono)] = c
        self.num_vars = num_vars
        self.trunc_degree = trunc_degree
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int, trunc_degree: int) -> "Series":
        return cls(num_vars, trunc_degree)

    @classmethod
    def constant(cls, num_vars: int, trunc_degree: int, value) -> "Series":
        mono = (0,) * num_vars
        return cls(num_vars, trunc_degree, {mono: _frac(value)})

    @classmethod
    def one(cls, num_vars: int, trunc_degree: int) -> "Series":
        return cls.constant(num_vars, trunc_degree, 1)

    @classmethod
    def variable(cls, num_vars: int, trunc_degree: int, k: int) -> "Series":
        """The coordinate series t^{k+1} (k is 0-based)."""
        if not 0 <= k < num_vars:
            raise DomainError(f"variable index {k} out of range")
        mono = tuple(1 if i == k else 0 for i in range(num_vars))
        return cls(num_vars, trunc_degree, {mono: Fraction(1)})

    def zero_like(self) -> "Series":
        return Series(self.num_vars, self.trunc_degree)

    def one_like(self) -> "Series":
        return Series.one(self.num_vars, self.trunc_degree)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.num_vars, Fraction(0))

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def min_degree(self) -> int | None:
        """Lowest total degree with a nonzero coefficient, or None if zero."""
        if not self.terms:
            return None
        return min(sum(m) for m in self.terms)

    def homogeneous_part(self, d: int) -> "Series":
        return Series(self.num_vars, self.trunc_degree,
                      {m: c for m, c in self.terms.items() if sum(m) == d})

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Series"):
        if self.num_vars != other.num_vars or self.trunc_degree != other.trunc_degree:
            raise ShapeError(
                f"series shapes differ: ({self.num_vars},{self.trunc_degree}) vs "
                f"({other.num_vars},{other.trunc_degree})")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        out = Series.__new__(Series)
        out.num_vars, out.trunc_degree, out.terms = self.num_vars, self.trunc_degree, terms
        return out

    def __neg__(self) -> "Series":
        out = Series.__new__(Series)
        out.num_vars, out.trunc_degree = self.num_vars, self.trunc_degree
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, c) -> "Series":
        c = _frac(c)
        out = Series.__new__(Series)
        out.num_vars, out.trunc_degree = self.num_vars, self.trunc_degree
        out.terms = {} if c == 0 else {m: c * v for m, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        D = self.trunc_degree
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.terms.items():
                if d1 + sum(m2) > D:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, Fraction(0)) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        out = Series.__new__(Series)
        out.num_vars, out.trunc_degree, out.terms = self.num_vars, D, terms
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (self.num_vars == other.num_vars
                and self.trunc_degree == other.trunc_degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.num_vars, self.trunc_degree,
                     tuple(sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0])))))

    # -- calculus ----------------------------------------------------------

    def partial(self, k: int) -> "Series":
        """Formal d/dt^{k+1}.  The output records truncation degree D-1:
        degree-D information of the input is lost by differentiation."""
        if not 0 <= k < self.num_vars:
            raise DomainError(f"variable index {k} out of range")
        if self.trunc_degree < 1:
            raise DomainError("cannot differentiate a degree-0 truncation")
        terms: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[k]
            if e == 0:
                continue
            m2 = tuple(v - 1 if i == k else v for i, v in enumerate(m))
            terms[m2] = c * e
        return Series(self.num_vars, self.trunc_degree - 1, terms)

    def truncated(self, new_degree: int) -> "Series":
        if new_degree > self.trunc_degree:
            raise DomainError("cannot extend a truncation (lost information)")
        return Series(self.num_vars, new_degree,
                      {m: c for m, c in self.terms.items() if sum(m) <= new_degree})

    def substitute(self, components: Sequence["Series"]) -> "Series":
        """Compose self with a coordinate map t^k -> components[k].

        All components must share (N, D) with self and have zero constant
        term, so that the composition is well-defined at truncation.
        """
        if len(components) != self.num_vars:
            raise ShapeError("component count must equal the variable count")
        for comp in components:
            self._check(comp)
            if comp.constant_term() != 0:
                raise DomainError("coordinate map components must vanish at the origin")
        # powers[k][e] = components[k] ** e, filled lazily
        powers: List[List[Series]] = [[self.one_like()] for _ in components]
        result = self.zero_like()
        for mono, c in sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0])):
            term = Series.constant(self.num_vars, self.trunc_degree, c)
            for k, e in enumerate(mono):
                if e == 0:
                    continue
                cache = powers[k]
                while len(cache) <= e:
                    cache.append(cache[-1] * components[k])
                term = term * cache[e]
            result = result + term
        return result

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0])):
            mono = "*".join(f"t{i+1}^{e}" if e > 1 else f"t{i+1}"
                            for i, e in enumerate(m) if e > 0)
            bits.append(f"{c}" if not mono else f"{c}*{mono}")
        return " + ".join(bits)


class DualSeries:
    """Series with an infinitesimal part: value + eps * epsilon, eps^2 = 0.

    Used for exact first derivatives along group directions.
    """

    __slots__ = ("value", "epsilon")

    def __init__(self, value: Series, epsilon: Series):
        value._check(epsilon)
        self.value = value
        self.epsilon = epsilon

    @classmethod
    def lift(cls, value: Series) -> "DualSeries":
        return cls(value, value.zero_like())

    def zero_like(self) -> "DualSeries":
        z = self.value.zero_like()
        return DualSeries(z, z)

    def one_like(self) -> "DualSeries":
        return DualSeries(self.value.one_like(), self.value.zero_like())

    def is_zero(self) -> bool:
        return self.value.is_zero() and self.epsilon.is_zero()

    def __add__(self, other: "DualSeries") -> "DualSeries":
        return DualSeries(self.value + other.value, self.epsilon + other.epsilon)

    def __neg__(self) -> "DualSeries":
        return DualSeries(-self.value, -self.epsilon)

    def __sub__(self, other: "DualSeries") -> "DualSeries":
        return DualSeries(self.value - other.value, self.epsilon - other.epsilon)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return DualSeries(self.value * other, self.epsilon * other)
        if not isinstance(other, DualSeries):
            return NotImplemented
        return DualSeries(self.value * other.value,
                          self.value * other.epsilon + self.epsilon * other.value)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return DualSeries(self.value * other, self.epsilon * other)
        return NotImplemented

    def scale(self, c) -> "DualSeries":
        return DualSeries(self.value.scale(c), self.epsilon.scale(c))

    def partial(self, k: int) -> "DualSeries":
        return DualSeries(self.value.partial(k), self.epsilon.partial(k))

    def truncated(self, d: int) -> "DualSeries":
        return DualSeries(self.value.truncated(d), self.epsilon.truncated(d))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualSeries):
            return NotImplemented
        return self.value == other.value and self.epsilon == other.epsilon

    def __repr__(self):
        return f"({self.value!r}) + eps*({self.epsilon!r})"


class SeriesMatrix:
    """Square matrix with Series (or DualSeries) entries sharing one shape."""

    __slots__ = ("m", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        m = len(entries)
        if m == 0 or any(len(row) != m for row in entries):
            raise ShapeError("matrix must be square and non-empty")
        self.m = m
        self.entries = [list(row) for row in entries]

    @classmethod
    def zeros(cls, m: int, like) -> "SeriesMatrix":
        z = like.zero_like()
        return cls([[z for _ in range(m)] for _ in range(m)])

    @classmethod
    def identity(cls, m: int, like) -> "SeriesMatrix":
        one, zero = like.one_like(), like.zero_like()
        return cls([[one if i == j else zero for j in range(m)] for i in range(m)])

    @classmethod
    def from_const(cls, rows: Sequence[Sequence], num_vars: int, trunc_degree: int) -> "SeriesMatrix":
        """Lift a matrix of rationals to constant series entries."""
        return cls([[Series.constant(num_vars, trunc_degree, c) for c in row] for row in rows])

    @classmethod
    def diagonal(cls, diag: Sequence) -> "SeriesMatrix":
        z = diag[0].zero_like()
        m = len(diag)
        return cls([[diag[i] if i == j else z for j in range(m)] for i in range(m)])

    def _check(self, other: "SeriesMatrix"):
        if self.m != other.m:
            raise ShapeError(f"matrix sizes differ: {self.m} vs {other.m}")

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        return SeriesMatrix([[a - b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "SeriesMatrix":
        return SeriesMatrix([[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, SeriesMatrix):
            self._check(other)
            m = self.m
            out = []
            for i in range(m):
                row = []
                for j in range(m):
                    acc = self.entries[i][0] * other.entries[0][j]
                    for k in range(1, m):
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                    row.append(acc)
                out.append(row)
            return SeriesMatrix(out)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "SeriesMatrix":
        return SeriesMatrix([[a * c for a in row] for row in self.entries])

    def left_mul_const(self, rows: Sequence[Sequence[Fraction]]) -> "SeriesMatrix":
        """rows @ self, with rows an m x m matrix of rationals."""
        m = self.m
        out = []
        for i in range(m):
            new_row = []
            for j in range(m):
                acc = self.entries[0][j] * _frac(rows[i][0])
                for k in range(1, m):
                    acc = acc + self.entries[k][j] * _frac(rows[i][k])
                new_row.append(acc)
            out.append(new_row)
        return SeriesMatrix(out)

    def right_mul_const(self, rows: Sequence[Sequence[Fraction]]) -> "SeriesMatrix":
        """self @ rows, with rows an m x m matrix of rationals."""
        m = self.m
        out = []
        for i in range(m):
            new_row = []
            for j in range(m):
                acc = self.entries[i][0] * _frac(rows[0][j])
                for k in range(1, m):
                    acc = acc + self.entries[i][k] * _frac(rows[k][j])
                new_row.append(acc)
            out.append(new_row)
        return SeriesMatrix(out)

    def partial(self, k: int) -> "SeriesMatrix":
        return SeriesMatrix([[a.partial(k) for a in row] for row in self.entries])

    def truncated(self, d: int) -> "SeriesMatrix":
        return SeriesMatrix([[a.truncated(d) for a in row] for row in self.entries])

    def trace(self):
        acc = self.entries[0][0]
        for i in range(1, self.m):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.entries for a in row)

    def constant_term(self) -> List[List[Fraction]]:
        return [[a.constant_term() for a in row] for row in self.entries]

    def value_part(self) -> "SeriesMatrix":
        return SeriesMatrix([[a.value for a in row] for row in self.entries])

    def eps_part(self) -> "SeriesMatrix":
        return SeriesMatrix([[a.epsilon for a in row] for row in self.entries])

    def lift_dual(self, eps: "SeriesMatrix | None" = None) -> "SeriesMatrix":
        """Lift Series entries to DualSeries, with optional epsilon part."""
        if eps is None:
            return SeriesMatrix([[DualSeries.lift(a) for a in row] for row in self.entries])
        self._check(eps)
        return SeriesMatrix([[DualSeries(a, b) for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, eps.entries)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.m == other.m and self.entries == other.entries

    def __repr__(self):
        rows = ["[" + ", ".join(repr(a) for a in row) + "]" for row in self.entries]
        return "SeriesMatrix([" + "; ".join(rows) + "])"


def series_matrix_inverse(mat: SeriesMatrix) -> SeriesMatrix:
    """Inverse of a matrix of Series whose constant-term matrix is invertible."""
    from . import ratmat

    sample = mat.entries[0][0]
    if isinstance(sample, DualSeries):
        # (P + eps Q)^-1 = P^-1 - eps P^-1 Q P^-1
        p_inv = series_matrix_inverse(mat.value_part())
        corr = p_inv * mat.eps_part() * p_inv
        return p_inv.lift_dual(-corr)
    c0 = ratmat.inverse(mat.constant_term())
    # mat = C (I - N) with N = I - C^-1-normalized remainder, N = O(t)
    normalized = mat.left_mul_const(c0)   # = I - N
    ident = SeriesMatrix.identity(mat.m, sample)
    n = ident - normalized
    acc = ident
    power = ident
    for _ in range(sample.trunc_degree):
        power = power * n
        if power.is_zero():
            break
        acc = acc + power
    return acc.right_mul_const(c0)


@dataclass(frozen=True)
class CoordinateMap:
    """Formal change of coordinates: N series with zero constant term."""

    components: Tuple[Series, ...]

    def __init__(self, components: Sequence[Series]):
        components = tuple(components)
        if not components:
            raise ShapeError("empty coordinate map")
        n = components[0].num_vars
        if len(components) != n:
            raise ShapeError("coordinate map needs exactly one component per variable")
        for comp in components:
            components[0]._check(comp)
            if comp.constant_term() != 0:
                raise DomainError("coordinate map components must vanish at the origin")
        object.__setattr__(self, "components", components)

    @property
    def num_vars(self) -> int:
        return len(self.components)

    @property
    def trunc_degree(self) -> int:
        return self.components[0].trunc_degree

    @classmethod
    def identity(cls, num_vars: int, trunc_degree: int) -> "CoordinateMap":
        return cls([Series.variable(num_vars, trunc_degree, k) for k in range(num_vars)])

    def jacobian_at_zero(self) -> List[List[Fraction]]:
        n = self.num_vars
        jac = []
        for comp in self.components:
            row = [Fraction(0)] * n
            for mono, c in comp.terms.items():
                if sum(mono) == 1:
                    row[mono.index(1)] = c
            jac.append(row)
        return jac

    def apply(self, series: Series) -> Series:
        return series.substitute(self.components)

    def compose(self, inner: "CoordinateMap") -> "CoordinateMap":
        """self after inner: t -> self(inner(t))."""
        return CoordinateMap([c.substitute(inner.components) for c in self.components])

    def inverse(self) -> "CoordinateMap":
        """Compositional inverse, computed degree by degree.

        Writing self = L + h with L the linear part and h = O(t^2), the
        inverse g solves g = L^-1 (id - h(g)); iterating from g = L^-1 id
        gains at least one correct degree per pass.
        """
        from . import ratmat

        n, d = self.num_vars, self.trunc_degree
        jac = self.jacobian_at_zero()
        try:
            jac_inv = ratmat.inverse(jac)
        except DomainError:
            raise DomainError("coordinate map has a singular linear part")

        def linear_apply(rows, vec: Sequence[Series]) -> List[Series]:
            out = []
            for i in range(n):
                acc = vec[0].scale(rows[i][0])
                for k in range(1, n):
                    acc = acc + vec[k].scale(rows[i][k])
                out.append(acc)
            return out

        identity = [Series.variable(n, d, k) for k in range(n)]
        linear = linear_apply(jac, identity)
        higher = [c - l for c, l in zip(self.components, linear)]
        g = linear_apply(jac_inv, identity)
        for _ in range(d):
            hg = [h.substitute(g) for h in higher]
            g = linear_apply(jac_inv, [t - v for t, v in zip(identity, hg)])
        inv = CoordinateMap(g)
        check = self.compose(inv)
        if any(c != v for c, v in zip(check.components, identity)):
            raise DomainError("coordinate map inversion failed the round-trip check")
        return inv
