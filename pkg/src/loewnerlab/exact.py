"""Exact rational linear algebra on small dense matrices.

Everything here works over ``fractions.Fraction``, so results carry no
rounding error: determinants and ranks are exact, and the congruence
diagonalization yields exact inertia counts.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .types import Inertia


def as_fraction_rows(rows) -> list[list[Fraction]]:
    out = []
    for row in rows:
        new = []
        for e in row:
            if not isinstance(e, Rational):
                raise ValueError(f"exact arithmetic needs rational entries, got {e!r}")
            new.append(Fraction(e))
        out.append(new)
    return out


def det_fraction(rows) -> Fraction:
    """Exact determinant by Gaussian elimination with nonzero pivoting."""
    A = as_fraction_rows(rows)
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant needs a square matrix")
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            if A[i][k]:
                f = A[i][k] / A[k][k]
                for j in range(k + 1, n):
                    A[i][j] -= f * A[k][j]
    return det


def rank_fraction(rows) -> int:
    """Exact rank by row reduction; accepts rectangular input."""
    A = as_fraction_rows(rows)
    if not A:
        return 0
    nrows, ncols = len(A), len(A[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        for i in range(row + 1, nrows):
            if A[i][col]:
                f = A[i][col] / A[row][col]
                for j in range(col, ncols):
                    A[i][j] -= f * A[row][j]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def rational_inertia(rows) -> Inertia:
    """Exact inertia by symmetric congruence diagonalization.

    Pivots on a nonzero diagonal entry when one exists.  When the whole
    trailing diagonal vanishes but some off-diagonal entry A[i][j] does not,
    adding row/column j into row/column i is a congruence that makes
    A[i][i] = 2*A[i][j] != 0, so elimination can continue.  Rational
    arithmetic has no stability concerns, so no magnitude pivoting is done.
    """
    A = as_fraction_rows(rows)
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("inertia needs a square matrix")
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                raise ValueError("inertia needs a symmetric matrix")
    pos = neg = zero = 0
    k = 0
    while k < n:
        piv = next((j for j in range(k, n) if A[j][j] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0),
                None,
            )
            if pair is None:
                zero += n - k
                break
            i, j = pair
            for t in range(k, n):
                A[i][t] += A[j][t]
            for t in range(k, n):
                A[t][i] += A[t][j]
            piv = i
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            for t in range(n):
                A[t][k], A[t][piv] = A[t][piv], A[t][k]
        d = A[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        col = [A[i][k] for i in range(n)]
        for i in range(k + 1, n):
            if col[i]:
                fi = col[i] / d
                for j in range(k + 1, n):
                    A[i][j] -= fi * col[j]
        k += 1
    return Inertia(pos, zero, neg)
