"""Zero counting for divided-difference combinations, sign-regularity scans,
compound matrices, determinant identities, complex determinant zeros, the
derivative action of matrix powers, and the power-sum comparison."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Optional, Sequence, Union

import mpmath
from mpmath import mp, mpc, mpf

from . import builders
from .builders import LoewnerSpec
from .exact import det_fraction
from .inertia import InertiaReport, consensus_inertia, eig_sym
from .types import (
    DEFAULT_TOL,
    Exponent,
    Inertia,
    PointConfig,
    Scalar,
    SymMatrix,
    ToleranceContext,
    to_mpf,
)


# ---------------------------------------------------------------------------
# Linear combinations of divided differences and their zeros


@dataclass(frozen=True)
class ComboFunction:
    """f(x) = sum_j c_j (x^r - p_j^r)/(x - p_j) on (0, inf)."""

    config: PointConfig
    coeffs: tuple
    r: Scalar

    def __post_init__(self):
        if len(self.coeffs) != self.config.n:
            raise ValueError("one coefficient per point is required")
        if all(c == 0 for c in self.coeffs):
            raise ValueError("at least one coefficient must be nonzero")


def _term_with_bound(x, pj, prj, r, eps):
    """Divided-difference term at x plus a roundoff bound for its value.

    Near-coincident arguments are evaluated through expm1/log at doubled
    precision, which kills the cancellation and keeps the error bound
    proportional to the term itself.
    """
    if x == pj:
        v = r * pj ** (r - 1)
        return v, 16 * eps * abs(v)
    d = x - pj
    if abs(d) <= pj / 4:
        with mp.extraprec(mp.prec):
            u = d / pj
            t = mp.expm1(r * mp.log(1 + u)) / u
            v = pj ** (r - 1) * t
        v = +v
        return v, 16 * eps * abs(v)
    v = (x ** r - prj) / d
    return v, 16 * eps * (x ** r + prj) / abs(d)


def _combo_value_bound(f: ComboFunction, x, pv, prv, r, eps):
    n = f.config.n
    total = mpf(0)
    bound = mpf(0)
    for j in range(n):
        c = to_mpf(f.coeffs[j])
        if c == 0:
            continue
        v, b = _term_with_bound(x, pv[j], prv[j], r, eps)
        total += c * v
        bound += abs(c) * (b + eps * abs(v) * n)
    return total, bound


def combo_eval(f: ComboFunction, x: Scalar, tol: ToleranceContext = DEFAULT_TOL):
    """Evaluate the combination at x > 0 (limit rule at the nodes)."""
    if not x > 0:
        raise ValueError(f"argument must be positive, got {x!r}")
    with tol.prec():
        pv = f.config.mp_points()
        r = to_mpf(f.r)
        prv = [p ** r for p in pv]
        value, _ = _combo_value_bound(f, to_mpf(x), pv, prv, r, tol.eps())
        return value


@dataclass(frozen=True)
class ScanPolicy:
    """Interval and grid policy for the sign scan (None fields use defaults)."""

    x_min: Optional[float] = None
    x_max: Optional[float] = None
    grid: Optional[int] = None
    refine_levels: int = 3
    refine_points: int = 8


@dataclass(frozen=True)
class ZeroCountReport:
    count: int
    brackets: tuple
    ambiguous: tuple
    grid: int


def count_zeros(f: ComboFunction, scan: Optional[ScanPolicy] = None,
                tol: ToleranceContext = DEFAULT_TOL) -> ZeroCountReport:
    """Count strict sign changes of the combination on a geometric grid.

    Values within their own roundoff bound are refined locally (up to
    refine_levels); whatever stays unresolved is reported as ambiguous
    rather than guessed.  Changes are only counted between strictly
    classified values, so the count never exceeds the true zero count.
    """
    scan = scan or ScanPolicy()
    with tol.prec():
        pts = f.config.points
        a = mpf(scan.x_min) if scan.x_min is not None else mpf(min(pts)) / 100
        b = mpf(scan.x_max) if scan.x_max is not None else mpf(max(pts)) * 100
        if not 0 < a < b:
            raise ValueError("scan interval must satisfy 0 < x_min < x_max")
        N = scan.grid if scan.grid is not None else tol.grid_points
        pv = f.config.mp_points()
        r = to_mpf(f.r)
        prv = [p ** r for p in pv]
        eps = tol.eps()

        memo: dict = {}

        def classify(x):
            s = memo.get(x)
            if s is None:
                v, bound = _combo_value_bound(f, x, pv, prv, r, eps)
                s = 0 if abs(v) <= bound else (1 if v > 0 else -1)
                memo[x] = s
            return s

        la, lb = mp.log(a), mp.log(b)
        xs = [mp.exp(la + (lb - la) * i / (N - 1)) for i in range(N)]
        unresolved = []

        def refine(lo, hi, level):
            llo, lhi = mp.log(lo), mp.log(hi)
            m = scan.refine_points
            inner = [mp.exp(llo + (lhi - llo) * (i + 1) / (m + 1)) for i in range(m)]
            cls = [(x, classify(x)) for x in inner]
            pts_loc = [lo] + inner + [hi]
            for idx, (x, s) in enumerate(cls):
                if s == 0:
                    if level >= scan.refine_levels:
                        unresolved.append(x)
                    else:
                        refine(pts_loc[idx], pts_loc[idx + 2], level + 1)

        for i, x in enumerate(xs):
            if classify(x) == 0:
                lo = xs[i - 1] if i > 0 else xs[0]
                hi = xs[i + 1] if i < N - 1 else xs[N - 1]
                if lo < hi:
                    refine(lo, hi, 1)
                else:
                    unresolved.append(x)

        strict = sorted((x, s) for x, s in memo.items() if s != 0)
        count = 0
        brackets = []
        prev_x = prev_s = None
        for x, s in strict:
            if prev_s is not None and s != prev_s:
                count += 1
                brackets.append((float(prev_x), float(x)))
            prev_x, prev_s = x, s
        amb = tuple(sorted({float(x) for x in unresolved}))
        return ZeroCountReport(count, tuple(brackets), amb, N)


# ---------------------------------------------------------------------------
# Minors: sign-regularity scans and compound matrices


MatrixLike = Union[SymMatrix, Sequence[Sequence]]


def _as_rows(A: MatrixLike) -> tuple[tuple, ...]:
    if isinstance(A, SymMatrix):
        return A.entries
    return tuple(tuple(row) for row in A)


def _det_any(rows, tol: ToleranceContext):
    """Determinant of a small matrix: exact for rational entries, LU otherwise."""
    if all(isinstance(e, Rational) for row in rows for e in row):
        return det_fraction(rows)
    with tol.prec():
        n = len(rows)
        M = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                M[i, j] = rows[i][j]
        return mp.det(M)


def _minor_sign(rows, tol: ToleranceContext) -> int:
    """Sign of the minor, with a Hadamard-scaled zero threshold for floats."""
    d = _det_any(rows, tol)
    if isinstance(d, Rational):
        return 0 if d == 0 else (1 if d > 0 else -1)
    with tol.prec():
        had = mpf(1)
        for row in rows:
            had *= mp.sqrt(mp.fsum(to_mpf(e) ** 2 for e in row))
        if abs(d) <= to_mpf(tol.zero_rel_tol) * had:
            return 0
        return 1 if d > 0 else -1


@dataclass(frozen=True)
class SsrReport:
    """Per-size minor sign summary: '+', '-', 'mixed', or 'zero' for each k."""

    order: int
    per_k: tuple[str, ...]
    ssr_class: str
    k_max: int

    def sign_for(self, k: int) -> str:
        return self.per_k[k - 1]


_SSR_MAX_ORDER = 7  # all-minors enumeration is C(n,k)^2 per size


def ssr_scan(A: MatrixLike, k_max: Optional[int] = None,
             tol: ToleranceContext = DEFAULT_TOL) -> SsrReport:
    """Classify every k x k minor sign for k up to k_max.

    A 'mixed' verdict requires two minors of opposite strict sign; 'zero'
    means at least one minor fell under the zero threshold and none clashed.
    """
    rows = _as_rows(A)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("sign-regularity scan needs a square matrix")
    if n > _SSR_MAX_ORDER:
        raise ValueError(f"order {n} too large for exhaustive minor scan (max {_SSR_MAX_ORDER})")
    k_max = n if k_max is None else k_max
    if not 1 <= k_max <= n:
        raise ValueError(f"need 1 <= k_max <= {n}")
    verdicts = []
    for k in range(1, k_max + 1):
        has_pos = has_neg = has_zero = False
        for R in combinations(range(n), k):
            for C in combinations(range(n), k):
                sub = [[rows[i][j] for j in C] for i in R]
                s = _minor_sign(sub, tol)
                if s > 0:
                    has_pos = True
                elif s < 0:
                    has_neg = True
                else:
                    has_zero = True
        if has_pos and has_neg:
            verdicts.append('mixed')
        elif has_zero:
            verdicts.append('zero')
        elif has_pos:
            verdicts.append('+')
        else:
            verdicts.append('-')
    m = 0
    for v in verdicts:
        if v in ('+', '-'):
            m += 1
        else:
            break
    if m == n:
        cls = 'SSR'
    elif m >= 1:
        cls = f'SSR_{m}'
    else:
        cls = 'none'
    return SsrReport(n, tuple(verdicts), cls, k_max)


def compound_matrix(A: MatrixLike, k: int,
                    tol: ToleranceContext = DEFAULT_TOL):
    """k-th compound: minors indexed by lexicographic k-subsets of rows/columns.

    Symmetric input yields a SymMatrix (upper minors mirrored, so symmetry
    is exact); general input yields plain rows.
    """
    rows = _as_rows(A)
    n = len(rows)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n}")
    subsets = list(combinations(range(n), k))

    def minor(a, b):
        sub = [[rows[i][j] for j in subsets[b]] for i in subsets[a]]
        return _det_any(sub, tol)

    if isinstance(A, SymMatrix):
        return SymMatrix.build(len(subsets), lambda a, b: minor(a, b))
    return tuple(tuple(minor(a, b) for b in range(len(subsets)))
                 for a in range(len(subsets)))


# ---------------------------------------------------------------------------
# Closed-form determinants for three nodes


def _three_nodes(config: PointConfig):
    if config.n != 3:
        raise ValueError(f"closed form needs exactly 3 points, got {config.n}")
    if config.exact is not None:
        return config.exact, True
    return config.points, False


def det_closed_form_L3(config: PointConfig):
    """det L_3 for three nodes: -(p1-p2)^2 (p1-p3)^2 (p2-p3)^2."""
    (p1, p2, p3), is_exact = _three_nodes(config)
    v = -((p1 - p2) * (p1 - p3) * (p2 - p3)) ** 2
    return v if is_exact else mpf(v)


def det_closed_form_L4(config: PointConfig):
    """det L_4 for three nodes: -2 prod (p_i-p_j)^2 {(sum p)(sum pp) + p1 p2 p3}."""
    (p1, p2, p3), is_exact = _three_nodes(config)
    gaps = ((p1 - p2) * (p1 - p3) * (p2 - p3)) ** 2
    sym = (p1 + p2 + p3) * (p1 * p2 + p1 * p3 + p2 * p3) + p1 * p2 * p3
    v = -2 * gaps * sym
    return v if is_exact else mpf(v)


# ---------------------------------------------------------------------------
# The determinant as a function of a complex exponent


def complex_det(config: PointConfig, z, tol: ToleranceContext = DEFAULT_TOL) -> mpc:
    """det [(p_i^z - p_j^z)/(p_i - p_j)] with principal-branch powers.

    Diagonal entries take the limit z*p_i^(z-1); the determinant comes from
    complex LU with partial pivoting.
    """
    with tol.prec():
        p = config.mp_points()
        zz = mpc(z)
        n = config.n
        logs = [mp.log(x) for x in p]
        pz = [mp.exp(zz * l) for l in logs]
        M = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                if i == j:
                    M[i, j] = zz * mp.exp((zz - 1) * logs[i])
                else:
                    M[i, j] = (pz[i] - pz[j]) / (p[i] - p[j])
        return mp.det(M)


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("rectangle must have positive extent")

    @property
    def center(self) -> complex:
        return complex((self.re_min + self.re_max) / 2, (self.im_min + self.im_max) / 2)

    @property
    def max_side(self) -> float:
        return max(self.re_max - self.re_min, self.im_max - self.im_min)

    def corners(self) -> list[complex]:
        return [complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max)]

    def split(self, ratio: float = 0.5) -> list["Rect"]:
        rs = self.re_min + ratio * (self.re_max - self.re_min)
        is_ = self.im_min + ratio * (self.im_max - self.im_min)
        return [Rect(self.re_min, rs, self.im_min, is_),
                Rect(rs, self.re_max, self.im_min, is_),
                Rect(self.re_min, rs, is_, self.im_max),
                Rect(rs, self.re_max, is_, self.im_max)]

    def inflated(self, factor: float) -> "Rect":
        cr = (self.re_min + self.re_max) / 2
        ci = (self.im_min + self.im_max) / 2
        hw = (self.re_max - self.re_min) / 2 * factor
        hh = (self.im_max - self.im_min) / 2 * factor
        return Rect(cr - hw, cr + hw, ci - hh, ci + hh)


@dataclass(frozen=True)
class ZeroCell:
    rect: Rect
    winding: int

    @property
    def center(self) -> complex:
        return self.rect.center


@dataclass(frozen=True)
class ComplexScanReport:
    region: Rect
    total_winding: int
    cells: tuple[ZeroCell, ...]
    regrids: int


class _BoundaryZero(Exception):
    """A zero sits on (or too close to) the contour being integrated."""


def _arg_step(f, z0, v0, z1, v1, depth):
    d = mp.arg(v1 / v0)
    if abs(d) <= 2.0:
        return d
    if depth >= 24:
        raise _BoundaryZero
    zm = (z0 + z1) / 2
    vm = f(zm)
    if vm == 0:
        raise _BoundaryZero
    return _arg_step(f, z0, v0, zm, vm, depth + 1) + _arg_step(f, zm, vm, z1, v1, depth + 1)


def _winding(f, rect: Rect, samples: int) -> int:
    corners = rect.corners()
    zs = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        for i in range(samples):
            t = i / samples
            zs.append(a + (b - a) * t)
    vals = [f(z) for z in zs]
    if any(v == 0 for v in vals):
        raise _BoundaryZero
    total = mpf(0)
    m = len(zs)
    for i in range(m):
        total += _arg_step(f, zs[i], vals[i], zs[(i + 1) % m], vals[(i + 1) % m], 0)
    w = total / (2 * mp.pi)
    k = int(mpmath.nint(w))
    if abs(w - k) > 0.25:
        raise _BoundaryZero
    return k


def _subdivide(f, rect: Rect, winding: int, depth: int, samples: int) -> list[ZeroCell]:
    if winding == 0:
        return []
    if depth <= 0:
        return [ZeroCell(rect, winding)]
    for ratio in (0.5, 0.537, 0.463, 0.519):
        try:
            children = rect.split(ratio)
            ws = [_winding(f, ch, samples) for ch in children]
            if sum(ws) != winding:
                continue
            out = []
            for ch, w in zip(children, ws):
                out.extend(_subdivide(f, ch, w, depth - 1, samples))
            return out
        except _BoundaryZero:
            continue
    raise _BoundaryZero


def complex_zero_scan(config: PointConfig, region, grid: int = 32,
                      tol: ToleranceContext = DEFAULT_TOL,
                      samples_per_side: int = 48) -> ComplexScanReport:
    """Locate zeros of the complex determinant by argument-principle winding.

    The region is subdivided until cells shrink to ~1/grid of the region;
    cells with nonzero winding are reported with their winding count (the
    number of zeros inside, with multiplicity).  Boundary zeros trigger
    bounded re-gridding.  Absence of reported cells is evidence, not proof.
    """
    rect = region if isinstance(region, Rect) else Rect(*region)
    depth = max(1, int(mpmath.ceil(mp.log(grid, 2))))

    def f(z):
        return complex_det(config, z, tol)

    regrids = 0
    last = None
    for attempt in range(4):
        try:
            total = _winding(f, rect, samples_per_side)
            cells = _subdivide(f, rect, total, depth, samples_per_side)
            return ComplexScanReport(rect, total, tuple(cells), regrids)
        except _BoundaryZero as exc:
            last = exc
            rect = rect.inflated(1.0 + 0.017 * (attempt + 1))
            regrids += 1
    raise ArithmeticError("a determinant zero stayed on the contour after re-gridding") from last


# ---------------------------------------------------------------------------
# Derivative action of matrix powers (entrywise multiplier form)


def dk_apply(config: PointConfig, r: Scalar, X: SymMatrix,
             tol: ToleranceContext = DEFAULT_TOL) -> SymMatrix:
    """Entrywise product L_r o X: the derivative of A -> A^r at diag(p) applied to X."""
    if X.order != config.n:
        raise ValueError(f"operand order {X.order} does not match {config.n} points")
    L = builders.loewner_matrix(LoewnerSpec.of(config, r), tol)
    with tol.prec():
        return SymMatrix.build(
            config.n, lambda i, j: to_mpf(L.entries[i][j]) * to_mpf(X.entries[i][j]))


def dk_apply_function(config: PointConfig, f, fprime, X: SymMatrix,
                      tol: ToleranceContext = DEFAULT_TOL) -> SymMatrix:
    """Derivative action for a user-supplied scalar function.

    Multiplies X entrywise by the divided-difference matrix of ``f`` at the
    nodes, with ``fprime`` supplying the diagonal.  The callables receive and
    should return mpf values.
    """
    if X.order != config.n:
        raise ValueError(f"operand order {X.order} does not match {config.n} points")
    with tol.prec():
        p = config.mp_points()
        fv = [f(x) for x in p]

        def entry(i, j):
            if i == j:
                multiplier = fprime(p[i])
            else:
                multiplier = (fv[i] - fv[j]) / (p[i] - p[j])
            return multiplier * to_mpf(X.entries[i][j])

        return SymMatrix.build(config.n, entry)


@dataclass(frozen=True)
class NormProbe:
    bound: object      # sampled lower bound on the derivative norm
    reference: object  # max_i |r p_i^(r-1)|, the norm of r A^(r-1)
    samples: int
    seed: int

    @property
    def ratio(self):
        return self.bound / self.reference


def dk_norm_probe(config: PointConfig, r: Scalar, samples: int = 20, seed: int = 0,
                  tol: ToleranceContext = DEFAULT_TOL) -> NormProbe:
    """Sampled lower bound on the derivative norm against the reference.

    Maximizes the spectral norm of L_r o X over random unit-spectral-norm
    symmetric X, always including X = I (where the reference value is
    attained).  This is a lower bound by construction; equality with the
    reference is the behavior under test for 0 < r <= 1.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    n = config.n
    rng = random.Random(seed)
    with tol.prec():
        p = config.mp_points()
        rr = to_mpf(r)
        reference = max(abs(rr) * x ** (rr - 1) for x in p)

    def spectral(S: SymMatrix):
        return eig_sym(S, tol).scale

    ident = SymMatrix.diagonal([1] * n)
    bound = spectral(dk_apply(config, r, ident, tol))
    for _ in range(samples):
        raw = [[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)]
        X = SymMatrix.build(n, lambda i, j: mpf(raw[i][j]))
        nx = spectral(X)
        if nx == 0:
            continue
        with tol.prec():
            Xu = SymMatrix.build(n, lambda i, j: to_mpf(X.entries[i][j]) / nx)
        bound = max(bound, spectral(dk_apply(config, r, Xu, tol)))
    return NormProbe(bound, reference, samples, seed)


# ---------------------------------------------------------------------------
# Power-sum matrix comparison


@dataclass(frozen=True)
class PrCompareReport:
    power_sum: InertiaReport
    loewner: InertiaReport
    match: bool

    @property
    def inertia_power_sum(self) -> Inertia:
        return self.power_sum.consensus

    @property
    def inertia_loewner(self) -> Inertia:
        return self.loewner.consensus


def pr_compare(config: PointConfig, r: Scalar,
               tol: ToleranceContext = DEFAULT_TOL) -> PrCompareReport:
    """Compare the inertia of [(p_i+p_j)^r] with that of L_{r+1}."""
    if not r > 0:
        raise ValueError(f"exponent must be positive, got {r!r}")
    P = builders.power_sum_matrix(config, r, tol)
    p_rep = consensus_inertia(P, tol)
    ex = Exponent.of(r + 1)
    L = builders.loewner_matrix(LoewnerSpec(config, ex), tol)
    hint = None
    if ex.is_integer and ex.integer_value >= 1:
        hint = (config.ensure_exact(), ex.integer_value)
    l_rep = consensus_inertia(L, tol, exact_hint=hint)
    return PrCompareReport(p_rep, l_rep, p_rep.consensus == l_rep.consensus)
