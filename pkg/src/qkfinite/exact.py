"""Exact linear algebra over the integers and rationals.

Everything here works on plain nested sequences of ``int`` / ``Fraction``
and never touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

Number = int | Fraction
Matrix = Sequence[Sequence[Number]]


def _is_integral(matrix: Matrix) -> bool:
    return all(isinstance(x, int) for row in matrix for x in row)


def _normalize(x: Number) -> Number:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def check_square(matrix: Matrix) -> int:
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
    return n


def is_symmetric(matrix: Matrix) -> bool:
    n = check_square(matrix)
    return all(matrix[i][j] == matrix[j][i] for i in range(n) for j in range(i))


def bareiss_det(matrix: Matrix) -> Number:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting.

    Integer input stays in the integers: every division is exact. The
    determinant of the empty matrix is 1.
    """
    n = check_square(matrix)
    if n == 0:
        return 1
    integral = _is_integral(matrix)
    a = [list(row) if integral else [Fraction(x) for x in row] for row in matrix]
    sign = 1
    prev: Number = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = num // prev if integral else num / prev
            a[i][k] = 0
        prev = pivot
    return _normalize(sign * a[n - 1][n - 1])


def cofactor_det(matrix: Matrix) -> Number:
    """Laplace expansion along the first row. Exponential; oracle use only."""
    n = check_square(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total: Number = 0
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in matrix[1:])]
        total += (-1) ** j * matrix[0][j] * cofactor_det(minor)
    return _normalize(total)


def leading_principal_minors(matrix: Matrix) -> list[Number]:
    """All leading principal minors ``det(A[:k, :k])`` for ``k = 1..n``.

    Bareiss elimination without pivoting produces them as its pivots; if a
    zero pivot appears the remaining minors are computed one by one.
    """
    n = check_square(matrix)
    integral = _is_integral(matrix)
    a = [list(row) if integral else [Fraction(x) for x in row] for row in matrix]
    minors: list[Number] = []
    prev: Number = 1
    for k in range(n):
        pivot = a[k][k]
        if pivot == 0:
            minors.append(0)
            for m in range(k + 2, n + 1):
                minors.append(bareiss_det([row[:m] for row in matrix[:m]]))
            return minors
        minors.append(_normalize(pivot))
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = num // prev if integral else num / prev
        prev = pivot
    return minors


def ldl(matrix: Matrix) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact ``A = L D L^T`` with ``L`` unit lower triangular.

    Raises ``ValueError`` on a zero pivot (no such factorization without
    pivoting).
    """
    n = check_square(matrix)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D: list[Fraction] = []
    for j in range(n):
        dj = Fraction(matrix[j][j]) - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if dj == 0:
            raise ValueError(f"zero pivot at position {j}")
        D.append(dj)
        for i in range(j + 1, n):
            s = Fraction(matrix[i][j]) - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            L[i][j] = s / dj
    return L, D


def solve_ldl(L: list[list[Fraction]], D: list[Fraction], b: Sequence[Number]) -> list[Fraction]:
    n = len(D)
    y = [Fraction(0)] * n
    for i in range(n):
        y[i] = Fraction(b[i]) - sum(L[i][k] * y[k] for k in range(i))
    z = [y[i] / D[i] for i in range(n)]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        x[i] = z[i] - sum(L[k][i] * x[k] for k in range(i + 1, n))
    return x


def inverse(matrix: Matrix) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    n = check_square(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv_p = 1 / a[k][k]
        a[k] = [x * inv_p for x in a[k]]
        for r in range(n):
            if r != k and a[r][k] != 0:
                f = a[r][k]
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return [row[n:] for row in a]


def quadratic_form(matrix: Matrix, v: Sequence[Number]) -> Number:
    n = len(v)
    return _normalize(sum(matrix[i][j] * v[i] * v[j] for i in range(n) for j in range(n)))


def principal_submatrix(matrix: Matrix, idx: Sequence[int]) -> list[list[Number]]:
    return [[matrix[i][j] for j in idx] for i in idx]


def floor_center_plus_root(c: Fraction, rho: Fraction) -> int:
    """Largest integer ``h`` with ``h <= c + sqrt(rho)``; requires ``rho >= 0``."""
    h = (c.numerator // c.denominator) + isqrt(-(-rho.numerator // rho.denominator)) + 1
    while h > c and (h - c) ** 2 > rho:
        h -= 1
    return h


def ceil_center_minus_root(c: Fraction, rho: Fraction) -> int:
    """Smallest integer ``l`` with ``l >= c - sqrt(rho)``; requires ``rho >= 0``."""
    return -floor_center_plus_root(-c, rho)
