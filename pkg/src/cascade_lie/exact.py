"""Small exact linear algebra over the rationals.

Matrices are lists of lists of :class:`fractions.Fraction`.  Everything here is
dense and cubic; the matrices that show up in this package are at most a few
hundred rows.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Sequence

Matrix = list[list[Q]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Q(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Q(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[Q]]) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence[Q]], b: Sequence[Sequence[Q]]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Q(0)) for col in bt] for row in a]


def _echelon(a: Sequence[Sequence[Q]]) -> tuple[Matrix, int, int]:
    """Row-reduce a copy of ``a``; return (reduced, rank, sign of row swaps)."""
    m = [list(map(Q, row)) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    sign = 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            m[rank], m[pivot] = m[pivot], m[rank]
            sign = -sign
        p = m[rank][col]
        for i in range(rank + 1, nrows):
            f = m[i][col]
            if f:
                f /= p
                row_i, row_r = m[i], m[rank]
                for j in range(col, ncols):
                    row_i[j] -= f * row_r[j]
        rank += 1
        if rank == nrows:
            break
    return m, rank, sign


def rank(a: Sequence[Sequence[Q]]) -> int:
    if not a or not a[0]:
        return 0
    return _echelon(a)[1]


def det(a: Sequence[Sequence[Q]]) -> Q:
    n = len(a)
    if n == 0:
        return Q(1)
    if any(len(row) != n for row in a):
        raise ValueError("det needs a square matrix")
    m, r, sign = _echelon(a)
    if r < n:
        return Q(0)
    out = Q(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def inverse(a: Sequence[Sequence[Q]]) -> Matrix:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("inverse needs a square matrix")
    aug = [list(map(Q, row)) + e for row, e in zip(a, identity(n))]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def solve(a: Sequence[Sequence[Q]], b: Sequence[Q]) -> list[Q]:
    inv = inverse(a)
    return [sum((x * y for x, y in zip(row, b)), Q(0)) for row in inv]


def fmt_q(x: Q) -> str:
    """Render a rational as the canonical ``"p/q"`` string used in JSON output."""
    x = Q(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s: str | int) -> Q:
    return Q(s)
