"""Matrices over the Laurent coefficient rings.

Rank is computed over the fraction field by fraction-free (Bareiss)
elimination, so every intermediate entry stays in the ring and each division
is exact.  Inversion requires unit pivots, which is all the duality pairing
of a split quadric ever needs.
"""
from __future__ import annotations

from typing import Sequence

from .errors import NonDivisible
from .series import GradedScalar, RingSpec

Matrix = list[list[GradedScalar]]


def rank(rows: Sequence[Sequence[GradedScalar]], ring: RingSpec) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = ring.one()
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            a = m[i][c]
            for j in range(c + 1, ncols):
                m[i][j] = (p * m[i][j] - a * m[r][j]).exact_div(prev)
            m[i][c] = ring.zero()
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def inverse(rows: Sequence[Sequence[GradedScalar]], ring: RingSpec) -> Matrix:
    """Gauss-Jordan inverse using unit pivots only."""
    n = len(rows)
    m = [list(r) + [ring.one() if i == j else ring.zero() for j in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c].is_unit()), None)
        if piv is None:
            raise NonDivisible(f"no unit pivot in column {c}")
        m[c], m[piv] = m[piv], m[c]
        inv = m[c][c].inverse()
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


def matmul(a: Matrix, b: Matrix, ring: RingSpec) -> Matrix:
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            acc = ring.zero()
            for k, x in enumerate(row):
                if not x.is_zero() and not b[k][j].is_zero():
                    acc = acc + x * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def identity(n: int, ring: RingSpec) -> Matrix:
    return [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]
