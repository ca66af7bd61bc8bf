"""Exact linear algebra over the rationals.

Rows are cleared to integers first, then eliminated fraction-free (Bareiss),
so intermediate entries stay integral and no Fraction normalisation happens
inside the inner loop.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


class SingularSystem(ArithmeticError):
    pass


def _integer_rows(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction] | None):
    rows = []
    for i, row in enumerate(matrix):
        vals = list(row) + ([rhs[i]] if rhs is not None else [])
        den = 1
        for v in vals:
            den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
        rows.append([int(Fraction(v) * den) for v in vals])
    return rows


def bareiss_solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square system exactly, pivoting on the largest magnitude."""
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("expected a square system")
    if n == 0:
        return []
    a = _integer_rows(matrix, rhs)
    prev = 1
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[piv][k] == 0:
            raise SingularSystem(f"no pivot in column {k}")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(a[i][n])
        for j in range(i + 1, n):
            s -= a[i][j] * x[j]
        x[i] = s / a[i][i]
    return x


def nullspace(matrix: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the kernel via reduced row echelon form."""
    m = [[Fraction(v) for v in row] for row in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv if v else v for v in m[r]]
        pivot_row = [(j, v) for j, v in enumerate(m[r]) if v]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = m[i]
                for j, v in pivot_row:
                    row[j] -= f * v
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -m[row][fc]
        basis.append(v)
    return basis


def mat_vec(matrix: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in matrix]
