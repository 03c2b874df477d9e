"""Small helpers for square matrices of exact rationals (lists of lists)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .series import DomainError

Mat = List[List[Fraction]]


def as_mat(rows: Sequence[Sequence]) -> Mat:
    m = len(rows)
    if m == 0 or any(len(r) != m for r in rows):
        raise DomainError("matrix must be square and non-empty")
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int) -> Mat:
    return [[Fraction(0)] * m for _ in range(m)]


def identity(m: int) -> Mat:
    return [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]


def add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def neg(a: Mat) -> Mat:
    return [[-x for x in row] for row in a]


def scale(a: Mat, c) -> Mat:
    c = Fraction(c)
    return [[x * c for x in row] for row in a]


def mul(a: Mat, b: Mat) -> Mat:
    m = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0))
             for j in range(m)] for i in range(m)]


def commutator(a: Mat, b: Mat) -> Mat:
    return sub(mul(a, b), mul(b, a))


def is_zero(a: Mat) -> bool:
    return all(x == 0 for row in a for x in row)


def eq(a: Mat, b: Mat) -> bool:
    return a == b


def inverse(a: Mat) -> Mat:
    """Gauss-Jordan inverse; raises DomainError if singular."""
    m = len(a)
    work = [list(row) + ident_row for row, ident_row in zip(as_mat(a), identity(m))]
    for col in range(m):
        pivot = next((r for r in range(col, m) if work[r][col] != 0), None)
        if pivot is None:
            raise DomainError("matrix is singular over the rationals")
        work[col], work[pivot] = work[pivot], work[col]
        inv_p = 1 / work[col][col]
        work[col] = [x * inv_p for x in work[col]]
        for r in range(m):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return [row[m:] for row in work]


def nullspace(a: Mat) -> List[List[Fraction]]:
    """Basis of the kernel, by row reduction."""
    m = len(a)
    work = as_mat(a)
    pivots = []
    row = 0
    for col in range(m):
        pivot = next((r for r in range(row, m) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv_p = 1 / work[row][col]
        work[row] = [x * inv_p for x in work[row]]
        for r in range(m):
            if r != row and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -work[r][f]
        basis.append(vec)
    return basis
