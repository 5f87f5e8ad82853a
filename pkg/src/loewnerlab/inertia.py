"""Inertia of symmetric matrices by three independent routes.

Route one diagonalizes with cyclic orthogonal (Jacobi) rotations and counts
eigenvalue signs.  Route two runs a symmetric-pivoted block congruence
elimination (1x1 and 2x2 pivots) and counts pivot signs, which preserves
inertia by Sylvester's law.  Route three, available for integer exponents
with rational nodes, diagonalizes the exact rational matrix.  A report
reconciles whichever routes ran.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from mpmath import mp, mpf

from . import builders, exact
from .types import (
    DEFAULT_TOL,
    Exponent,
    Inertia,
    PointConfig,
    SymMatrix,
    ToleranceContext,
    to_mpf,
)

# Bunch-Kaufman pivot constant: bounds element growth in the 2x2/1x1 choice.
_BK_ALPHA = (1 + math.sqrt(17)) / 8


class EigenConvergenceError(RuntimeError):
    """Rotation sweeps failed to drive the off-diagonal mass under tolerance."""


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues plus the eigensolver's final off-diagonal mass."""

    eigenvalues: tuple
    offdiag_residual: object

    @property
    def scale(self):
        return max(abs(e) for e in self.eigenvalues)


@dataclass(frozen=True)
class InertiaReport:
    by_eigen: Inertia
    by_ldl: Inertia
    by_exact: Optional[Inertia]
    consensus: Inertia
    disagreement: bool


def _offdiag_mass(A, n):
    return mp.sqrt(mp.fsum(A[i][j] ** 2 for i in range(n) for j in range(n) if i != j))


def eig_sym(A: SymMatrix, tol: ToleranceContext = DEFAULT_TOL,
            max_sweeps: int = 30) -> Spectrum:
    """Eigenvalues by cyclic Jacobi rotations at working precision.

    Sweeps rotate every off-diagonal pair in fixed order until the
    off-diagonal Frobenius mass drops below residual_tol times the matrix
    norm.  Convergence is quadratic once the mass is small, so the sweep
    bound is generous; hitting it signals that the precision is too low
    for the requested tolerance.
    """
    n = A.order
    with tol.prec():
        M = [[to_mpf(e) for e in row] for row in A.entries]
        norm = mp.sqrt(mp.fsum(M[i][j] ** 2 for i in range(n) for j in range(n)))
        thresh = to_mpf(tol.residual_tol) * norm
        off = _offdiag_mass(M, n)
        sweeps = 0
        while off > thresh:
            if sweeps >= max_sweeps:
                raise EigenConvergenceError(
                    f"off-diagonal mass {mp.nstr(off, 5)} above {mp.nstr(thresh, 5)} "
                    f"after {max_sweeps} sweeps (precision too low?)"
                )
            skip = thresh / (2 * n)
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = M[p][q]
                    if abs(apq) <= skip:
                        continue
                    theta = (M[q][q] - M[p][p]) / (2 * apq)
                    t = 1 / (abs(theta) + mp.sqrt(1 + theta ** 2))
                    if theta < 0:
                        t = -t
                    c = 1 / mp.sqrt(1 + t ** 2)
                    s = t * c
                    for k in range(n):
                        akp = M[k][p]
                        akq = M[k][q]
                        M[k][p] = c * akp - s * akq
                        M[k][q] = s * akp + c * akq
                    for k in range(n):
                        apk = M[p][k]
                        aqk = M[q][k]
                        M[p][k] = c * apk - s * aqk
                        M[q][k] = s * apk + c * aqk
            sweeps += 1
            off = _offdiag_mass(M, n)
        return Spectrum(tuple(sorted(M[i][i] for i in range(n))), off)


def inertia_from_spectrum(s: Spectrum, scale, tol: ToleranceContext = DEFAULT_TOL) -> Inertia:
    """Classify eigenvalues against the relative zero threshold."""
    n = len(s.eigenvalues)
    thresh = to_mpf(tol.zero_rel_tol) * to_mpf(scale) * n
    pos = neg = zero = 0
    for lam in s.eigenvalues:
        if abs(lam) <= thresh:
            zero += 1
        elif lam > 0:
            pos += 1
        else:
            neg += 1
    return Inertia(pos, zero, neg)


def inertia_ldl(A: SymMatrix, tol: ToleranceContext = DEFAULT_TOL) -> Inertia:
    """Inertia from a Bunch-Kaufman style block congruence elimination.

    Positive/negative 1x1 pivots count toward pos/neg; a 2x2 pivot with
    negative determinant contributes one of each.  A trailing block whose
    norm has fallen below zero_rel_tol times the original norm is declared
    zero, which is how rank deficiency shows up in floating point.
    """
    n = A.order
    with tol.prec():
        M = [[to_mpf(e) for e in row] for row in A.entries]
        norm = mp.sqrt(mp.fsum(M[i][j] ** 2 for i in range(n) for j in range(n)))
        negligible = to_mpf(tol.zero_rel_tol) * norm
        pos = neg = zero = 0
        k = 0
        while k < n:
            trail = mp.sqrt(mp.fsum(M[i][j] ** 2 for i in range(k, n) for j in range(k, n)))
            if trail <= negligible:
                zero += n - k
                break
            absakk = abs(M[k][k])
            imax, colmax = k, mpf(0)
            for i in range(k + 1, n):
                v = abs(M[i][k])
                if v > colmax:
                    imax, colmax = i, v
            if absakk <= negligible and colmax <= negligible:
                # decoupled near-zero row/column
                zero += 1
                k += 1
                continue
            use_two = False
            piv = k
            if absakk < _BK_ALPHA * colmax:
                rowmax = mpf(0)
                for j in range(k, n):
                    if j != imax:
                        v = abs(M[imax][j])
                        if v > rowmax:
                            rowmax = v
                if absakk * rowmax >= _BK_ALPHA * colmax * colmax:
                    piv = k
                elif abs(M[imax][imax]) >= _BK_ALPHA * rowmax:
                    piv = imax
                else:
                    use_two = True
                    piv = imax
            if not use_two:
                if piv != k:
                    _swap_sym(M, k, piv)
                d = M[k][k]
                if d > 0:
                    pos += 1
                elif d < 0:
                    neg += 1
                else:
                    zero += 1
                    k += 1
                    continue
                col = [M[i][k] for i in range(n)]
                for i in range(k + 1, n):
                    if col[i]:
                        fi = col[i] / d
                        for j in range(k + 1, n):
                            M[i][j] -= fi * col[j]
                k += 1
            else:
                if piv != k + 1:
                    _swap_sym(M, k + 1, piv)
                a, b, c = M[k][k], M[k][k + 1], M[k + 1][k + 1]
                det = a * c - b * b
                if det < 0:
                    pos += 1
                    neg += 1
                elif det > 0:
                    if a + c > 0:
                        pos += 2
                    else:
                        neg += 2
                else:
                    zero += 1
                    tr = a + c
                    if tr > 0:
                        pos += 1
                    elif tr < 0:
                        neg += 1
                    else:
                        zero += 1
                if det != 0:
                    u = [M[i][k] for i in range(n)]
                    v = [M[i][k + 1] for i in range(n)]
                    for i in range(k + 2, n):
                        xi = (c * u[i] - b * v[i]) / det
                        yi = (a * v[i] - b * u[i]) / det
                        for j in range(k + 2, n):
                            M[i][j] -= xi * u[j] + yi * v[j]
                k += 2
        return Inertia(pos, zero, neg)


def _swap_sym(M, i, j):
    M[i], M[j] = M[j], M[i]
    for row in M:
        row[i], row[j] = row[j], row[i]


def inertia_exact_integer(config: PointConfig, r: int) -> Inertia:
    """Exact inertia of the integer-exponent Loewner matrix over the rationals."""
    ex = Exponent.of(r)
    if not ex.is_integer:
        raise ValueError(f"exact route needs an integer exponent, got {r!r}")
    if ex.integer_value < 1:
        raise ValueError(f"exact route needs an exponent >= 1, got {r!r}")
    if config.exact is None:
        raise ValueError("exact route needs rational nodes")
    L = builders.loewner_matrix_exact(config, ex.integer_value)
    return exact.rational_inertia(L.entries)


def inertia(A: SymMatrix, tol: ToleranceContext = DEFAULT_TOL,
            exact_hint: Optional[tuple[PointConfig, int]] = None) -> InertiaReport:
    """Run the eigenvalue and congruence routes (plus exact, when hinted).

    Disagreement is data, not an error: the caller should raise precision.
    When routes disagree the consensus field holds the most trustworthy one
    (exact if present, else the eigenvalue route).
    """
    spec = eig_sym(A, tol)
    scale = spec.scale
    by_eigen = inertia_from_spectrum(spec, scale, tol)
    by_ldl = inertia_ldl(A, tol)
    by_exact = None
    if exact_hint is not None:
        cfg, r = exact_hint
        by_exact = inertia_exact_integer(cfg, r)
    routes = [by_eigen, by_ldl] + ([by_exact] if by_exact is not None else [])
    agreed = all(x == routes[0] for x in routes)
    consensus = by_exact if by_exact is not None else by_eigen
    return InertiaReport(by_eigen, by_ldl, by_exact, consensus, not agreed)


def consensus_inertia(A: SymMatrix, tol: ToleranceContext = DEFAULT_TOL,
                      exact_hint: Optional[tuple[PointConfig, int]] = None,
                      max_escalations: int = 2) -> InertiaReport:
    """Inertia report, escalating precision until the routes agree."""
    rep = inertia(A, tol, exact_hint=exact_hint)
    while rep.disagreement and max_escalations > 0:
        tol = tol.escalated()
        rep = inertia(A, tol, exact_hint=exact_hint)
        max_escalations -= 1
    return rep
