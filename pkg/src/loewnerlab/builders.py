"""Constructors for the structured matrices under study.

The central object is the Loewner matrix of the power function t^r on a set
of positive nodes: entry (i,j) is the divided difference
(p_i^r - p_j^r)/(p_i - p_j), with the analytic limit r*p_i^(r-1) on the
diagonal.  The remaining builders (sinh form, diagonal and all-ones
factors, Vandermonde and antidiagonal factors, power-sum matrix, and the
two-sequence cross variant) supply the congruences and factorizations the
inertia analysis relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import mp, mpf

from .types import (
    DEFAULT_TOL,
    Exponent,
    PointConfig,
    Scalar,
    SymMatrix,
    ToleranceContext,
    to_mpf,
)


@dataclass(frozen=True)
class LoewnerSpec:
    config: PointConfig
    exponent: Exponent

    @classmethod
    def of(cls, config: PointConfig, r: Scalar) -> "LoewnerSpec":
        return cls(config, Exponent.of(r))


def loewner_matrix(spec: LoewnerSpec, tol: ToleranceContext = DEFAULT_TOL) -> SymMatrix:
    """Loewner matrix of t^r at the given nodes, at working precision.

    Diagonal entries always use the analytic limit r*p^(r-1); off-diagonal
    denominators are safe because the nodes are strictly increasing.
    """
    cfg = spec.config
    with tol.prec():
        p = cfg.mp_points()
        r = to_mpf(spec.exponent.r)
        pr = [x ** r for x in p]

        def entry(i, j):
            if i == j:
                return r * p[i] ** (r - 1)
            return (pr[i] - pr[j]) / (p[i] - p[j])

        return SymMatrix.build(cfg.n, entry)


def loewner_matrix_exact(config: PointConfig, r: int) -> SymMatrix:
    """Loewner matrix for integer r over the rationals, exactly.

    For r >= 1 the divided difference is expanded into the power sum
    p_i^(r-1) + p_i^(r-2) p_j + ... + p_j^(r-1), which avoids the
    subtraction entirely; negative integer r uses the plain quotient,
    harmless in exact arithmetic.
    """
    if config.exact is None:
        raise ValueError("exact Loewner matrix needs rational nodes")
    ex = Exponent.of(r)
    if not ex.is_integer:
        raise ValueError(f"exact Loewner matrix needs an integer exponent, got {r!r}")
    m = ex.integer_value
    p = config.exact

    def entry(i, j):
        if i == j:
            return m * p[i] ** (m - 1) if m != 0 else Fraction(0)
        if m == 0:
            return Fraction(0)
        if m >= 1:
            return sum(p[i] ** a * p[j] ** (m - 1 - a) for a in range(m))
        return (p[i] ** m - p[j] ** m) / (p[i] - p[j])

    return SymMatrix.build(config.n, entry)


def sinh_loewner(x: Sequence[Scalar], exponent: Exponent,
                 tol: ToleranceContext = DEFAULT_TOL) -> SymMatrix:
    """Matrix [sinh(r(x_i-x_j))/sinh(x_i-x_j)] with diagonal limit r.

    The abscissas may have any sign but must be strictly increasing; this is
    the congruence-reduced form of the Loewner matrix under p_i = e^{2 x_i}.
    """
    xs = list(x)
    for a, b in zip(xs, xs[1:]):
        if not a < b:
            raise ValueError("abscissas must be strictly increasing")
    with tol.prec():
        xm = [to_mpf(v) for v in xs]
        r = to_mpf(exponent.r)

        def entry(i, j):
            if i == j:
                return r
            d = xm[i] - xm[j]
            return mp.sinh(r * d) / mp.sinh(d)

        return SymMatrix.build(len(xs), entry)


def diag_D(config: PointConfig) -> SymMatrix:
    """Diagonal matrix of the nodes (exact when the config carries rationals)."""
    if config.exact is not None:
        return SymMatrix.diagonal(config.exact, zero=Fraction(0))
    return SymMatrix.diagonal(tuple(mpf(p) for p in config.points), zero=mpf(0))


def ones_E(n: int) -> SymMatrix:
    """All-ones matrix of order n."""
    if n < 1:
        raise ValueError("order must be at least 1")
    return SymMatrix.from_rows([[1] * n for _ in range(n)])


def vandermonde_W(config: PointConfig, r: int) -> tuple[tuple, ...]:
    """r x n Vandermonde matrix: row a holds the nodes to the power a."""
    ex = Exponent.of(r)
    if not ex.is_integer or ex.integer_value < 1:
        raise ValueError(f"Vandermonde factor needs a positive integer exponent, got {r!r}")
    m = ex.integer_value
    if config.exact is not None:
        p = config.exact
    else:
        p = [mpf(v) for v in config.points]
    return tuple(tuple(v ** a for v in p) for a in range(m))


def antidiag_V(r: int) -> SymMatrix:
    """Antidiagonal matrix of order r with unit entries."""
    ex = Exponent.of(r)
    if not ex.is_integer or ex.integer_value < 1:
        raise ValueError(f"antidiagonal factor needs a positive integer order, got {r!r}")
    m = ex.integer_value
    return SymMatrix.from_rows([
        [1 if i + j == m - 1 else 0 for j in range(m)] for i in range(m)
    ])


def power_sum_matrix(config: PointConfig, r: Scalar,
                     tol: ToleranceContext = DEFAULT_TOL) -> SymMatrix:
    """Matrix [(p_i + p_j)^r] at working precision."""
    with tol.prec():
        p = config.mp_points()
        rr = to_mpf(r)
        return SymMatrix.build(config.n, lambda i, j: (p[i] + p[j]) ** rr)


def cross_loewner(p: PointConfig, q: PointConfig, r: Scalar,
                  tol: ToleranceContext = DEFAULT_TOL) -> tuple[tuple, ...]:
    """Two-sequence divided-difference matrix [(p_i^r - q_j^r)/(p_i - q_j)].

    Coincident arguments (within unit roundoff of p_i) take the derivative
    value r*p_i^(r-1); with q = p this reduces to the plain Loewner matrix.
    """
    if p.n != q.n:
        raise ValueError("point sequences must have equal length")
    with tol.prec():
        pv = p.mp_points()
        qv = q.mp_points()
        rr = to_mpf(r)
        eps = tol.eps()
        rows = []
        for i in range(p.n):
            row = []
            for j in range(q.n):
                d = pv[i] - qv[j]
                if abs(d) <= eps * pv[i]:
                    row.append(rr * pv[i] ** (rr - 1))
                else:
                    row.append((pv[i] ** rr - qv[j] ** rr) / d)
            rows.append(tuple(row))
        return tuple(rows)
