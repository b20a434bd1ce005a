"""Dense exact linear algebra over ``Fraction``.

Matrices are lists of rows.  Everything here is plain Gauss-Jordan
elimination; sizes in this package stay below a few hundred.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int,
         col_order: Sequence[int] | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.

    Columns are scanned for pivots in ``col_order`` (default: left to right).
    Returns the nonzero reduced rows (row ``k`` has its pivot in ``pivots[k]``)
    and the pivot column list.
    """
    m = [list(r) for r in rows]
    order = range(ncols) if col_order is None else col_order
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivot_row = m[r]
        inv = 1 / pivot_row[c]
        if inv != 1:
            pivot_row[:] = [x * inv for x in pivot_row]
        nz = [j for j, x in enumerate(pivot_row) if x != 0]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = m[i]
                for j in nz:
                    row[j] -= f * pivot_row[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows, len(rows[0]))[1])


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return det


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(a)
    aug = [list(map(Fraction, a[i])) + identity(n)[i] for i in range(n)]
    red, piv = rref(aug, 2 * n, range(n))
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Unique solution of ``a x = b`` for square nonsingular ``a``."""
    n = len(a)
    aug = [list(map(Fraction, a[i])) + [Fraction(b[i])] for i in range(n)]
    red, piv = rref(aug, n + 1, range(n))
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n] for row in red]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*a)]
