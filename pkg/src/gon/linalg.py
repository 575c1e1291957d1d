"""Small exact linear algebra over Fraction matrices.

Matrices are lists of row lists; every entry is normalized to Fraction on the
way in. Dimensions stay tiny (n <= 8 or so), so plain Gaussian elimination is
fine and keeps the code auditable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DegenerateError, DimensionError
from .exact import Rat, frac

Vec = list[Fraction]
Mat = list[list[Fraction]]


def vec(entries: Sequence[Rat]) -> Vec:
    return [frac(x) for x in entries]


def mat(rows: Sequence[Sequence[Rat]]) -> Mat:
    m = [[frac(x) for x in row] for row in rows]
    if m and any(len(row) != len(m[0]) for row in m):
        raise DimensionError("ragged matrix")
    return m


def identity(n: int) -> Mat:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Mat, b: Mat) -> Mat:
    if len(a[0]) != len(b):
        raise DimensionError("inner dimensions differ")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Mat, v: Sequence[Rat]) -> Vec:
    v = vec(v)
    if len(a[0]) != len(v):
        raise DimensionError("inner dimensions differ")
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_dot(u: Sequence[Rat], v: Sequence[Rat]) -> Fraction:
    if len(u) != len(v):
        raise DimensionError("length mismatch")
    return sum((frac(x) * frac(y) for x, y in zip(u, v)), Fraction(0))


def vec_add(u: Sequence[Rat], v: Sequence[Rat]) -> Vec:
    return [frac(x) + frac(y) for x, y in zip(u, v)]


def vec_sub(u: Sequence[Rat], v: Sequence[Rat]) -> Vec:
    return [frac(x) - frac(y) for x, y in zip(u, v)]


def vec_scale(c: Rat, v: Sequence[Rat]) -> Vec:
    c = frac(c)
    return [c * frac(x) for x in v]


def gram(basis: Mat) -> Mat:
    """Gram matrix of the row vectors: G[i][j] = b_i . b_j."""
    return [[vec_dot(bi, bj) for bj in basis] for bi in basis]


def det(a: Mat) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in a):
        raise DimensionError("determinant of non-square matrix")
    m = [row[:] for row in a]
    sign = 1
    d = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        d *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign * d


def rank(a: Mat) -> int:
    if not a:
        return 0
    m = [row[:] for row in a]
    rows, cols = len(m), len(m[0])
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][col]
        for i in range(r + 1, rows):
            f = m[i][col] / p
            if f:
                for c in range(col, cols):
                    m[i][c] -= f * m[r][c]
        r += 1
        if r == rows:
            break
    return r


def solve(a: Mat, b: Sequence[Rat]) -> Vec:
    """Solve a x = b for square nonsingular a."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise DimensionError("solve needs square system")
    m = [row[:] + [frac(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise DegenerateError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col] / p
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return [m[i][n] / m[i][i] for i in range(n)]


def inverse(a: Mat) -> Mat:
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionError("inverse of non-square matrix")
    m = [row[:] + ident_row[:] for row, ident_row in zip(a, identity(n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise DegenerateError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def ldlt(g: Mat) -> tuple[Mat, Vec]:
    """Cholesky-style G = L D L^T for symmetric G, unit lower L, diagonal D.

    Raises DegenerateError when a pivot vanishes (G not positive definite
    enough to factor without pivoting).
    """
    n = len(g)
    if any(len(row) != n for row in g):
        raise DimensionError("ldlt of non-square matrix")
    for i in range(n):
        for j in range(i):
            if g[i][j] != g[j][i]:
                raise DimensionError("ldlt of non-symmetric matrix")
    L = identity(n)
    D: Vec = [Fraction(0)] * n
    for j in range(n):
        D[j] = g[j][j] - sum(L[j][k] * L[j][k] * D[k] for k in range(j))
        if D[j] == 0:
            raise DegenerateError("zero pivot in ldlt")
        for i in range(j + 1, n):
            s = g[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            L[i][j] = s / D[j]
    return L, D


def is_positive_definite(g: Mat) -> bool:
    try:
        _, D = ldlt(g)
    except DegenerateError:
        return False
    return all(d > 0 for d in D)


def quad_value(g: Mat, x: Sequence[Rat]) -> Fraction:
    """x^T G x."""
    return vec_dot(x, mat_vec(g, x))
