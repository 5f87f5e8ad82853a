"""Shared generators and independent oracles for the test suite."""

from fractions import Fraction
from itertools import permutations

from loewnerlab import make_point_config


def random_config(rng, n, lo=0.1, hi=10.0, min_gap=0.1, decimals=6):
    """Random strictly increasing float nodes in (lo, hi] with a minimum gap."""
    while True:
        pts = sorted(round(rng.uniform(lo, hi), decimals) for _ in range(n))
        if all(b - a >= min_gap for a, b in zip(pts, pts[1:])):
            return make_point_config(pts)


def random_rational_config(rng, n, max_num=60, max_den=6):
    """Random strictly increasing positive Fractions."""
    while True:
        vals = sorted({Fraction(rng.randint(1, max_num), rng.randint(1, max_den))
                       for _ in range(2 * n)})
        if len(vals) >= n:
            return make_point_config(vals[:n])


def random_symmetric_int(rng, n, lo=-5, hi=5):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = rng.randint(lo, hi)
            rows[i][j] = rows[j][i] = v
    return rows


def nonintegral(rng, lo, hi, keepout=0.05):
    """Uniform draw avoiding neighborhoods of integers."""
    while True:
        r = rng.uniform(lo, hi)
        if abs(r - round(r)) > keepout:
            return r


def perm_det(rows):
    """Determinant by permutation expansion: independent of any elimination code."""
    n = len(rows)
    total = None
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = rows[0][perm[0]]
        for i in range(1, n):
            prod = prod * rows[i][perm[i]]
        term = prod if inv % 2 == 0 else -prod
        total = term if total is None else total + term
    return total


def eig_2x2(a, b, c):
    """Closed-form eigenvalues of [[a, b], [b, c]], ascending."""
    import math
    mid = (a + c) / 2
    rad = math.sqrt(((a - c) / 2) ** 2 + b * b)
    return mid - rad, mid + rad


def mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    assert len(A[0]) == inner
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(rows)]


def transpose(A):
    return [list(col) for col in zip(*A)]
