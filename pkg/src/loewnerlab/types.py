"""Shared value types: point configurations, exponents, symmetric matrices,
inertia triples, and the working-precision policy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence, Union

import mpmath
from mpmath import mp, mpf

Scalar = Union[int, float, Fraction]

DEFAULT_PRECISION_BITS = 53
DEFAULT_ZERO_REL_TOL = 1e-10
DEFAULT_RESIDUAL_TOL = 1e-12
DEFAULT_GRID_POINTS = 100_000


def to_mpf(x) -> mpf:
    """Convert ints, floats, Fractions, or mpf to mpf at the current precision."""
    if isinstance(x, Fraction):
        return mpmath.mpmathify(x)
    return mpf(x)


@dataclass(frozen=True)
class ToleranceContext:
    """Precision policy shared by all numeric routines.

    ``zero_rel_tol`` decides when an eigenvalue (or pivot block) counts as
    zero relative to the matrix scale; ``residual_tol`` bounds identity
    residuals and eigensolver convergence.  Both shrink with the unit
    roundoff when a context is created through :meth:`at_bits`, since tiny
    true eigenvalues must stay classifiable at extended precision.
    """

    precision_bits: int = DEFAULT_PRECISION_BITS
    zero_rel_tol: Union[float, mpf] = DEFAULT_ZERO_REL_TOL
    residual_tol: Union[float, mpf] = DEFAULT_RESIDUAL_TOL
    grid_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")
        if not self.zero_rel_tol > 0:
            raise ValueError("zero_rel_tol must be positive")
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")

    @classmethod
    def at_bits(cls, bits: int, grid_points: int = DEFAULT_GRID_POINTS) -> "ToleranceContext":
        """Context at ``bits`` of precision with proportionally scaled thresholds."""
        scale = mpf(2) ** (DEFAULT_PRECISION_BITS - bits)
        return cls(
            precision_bits=bits,
            zero_rel_tol=DEFAULT_ZERO_REL_TOL * scale,
            residual_tol=DEFAULT_RESIDUAL_TOL * scale,
            grid_points=grid_points,
        )

    def escalated(self) -> "ToleranceContext":
        """Next context in the escalation ladder (at least 256 bits, else doubled)."""
        return ToleranceContext.at_bits(max(2 * self.precision_bits, 256), self.grid_points)

    def prec(self):
        """``mp.workprec`` context manager for this precision."""
        return mp.workprec(self.precision_bits)

    def eps(self) -> mpf:
        """Unit roundoff of the working reals."""
        return mpf(2) ** (1 - self.precision_bits)


DEFAULT_TOL = ToleranceContext()


@dataclass(frozen=True)
class Inertia:
    """Counts of positive, zero, and negative eigenvalues."""

    pos: int
    zero: int
    neg: int

    def __post_init__(self):
        if min(self.pos, self.zero, self.neg) < 0:
            raise ValueError("inertia counts must be nonnegative")

    @property
    def order(self) -> int:
        return self.pos + self.zero + self.neg

    def swapped(self) -> "Inertia":
        """Inertia of the negated matrix: positive and negative counts trade places."""
        return Inertia(self.neg, self.zero, self.pos)

    def padded(self, extra_zeros: int) -> "Inertia":
        """Same signs with ``extra_zeros`` more zero eigenvalues."""
        return Inertia(self.pos, self.zero + extra_zeros, self.neg)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.pos, self.zero, self.neg)


@dataclass(frozen=True)
class Exponent:
    """A real exponent plus its exact-integer classification."""

    r: Scalar
    is_integer: bool
    integer_value: Optional[int]

    def __post_init__(self):
        if self.is_integer != (self.integer_value is not None):
            raise ValueError("integer_value must be present exactly when is_integer")
        if self.is_integer and self.r != self.integer_value:
            raise ValueError("integer_value must equal r")

    @classmethod
    def of(cls, r: Scalar) -> "Exponent":
        if isinstance(r, Rational):
            if r.denominator == 1:
                return cls(r, True, int(r))
            return cls(r, False, None)
        k = int(round(r))
        if r == k:
            return cls(r, True, k)
        return cls(r, False, None)


@dataclass(frozen=True)
class PointConfig:
    """Strictly increasing positive abscissas, optionally backed by exact rationals."""

    points: tuple[float, ...]
    exact: Optional[tuple[Fraction, ...]] = None

    @property
    def n(self) -> int:
        return len(self.points)

    def mp_points(self) -> list[mpf]:
        """Node values at the current working precision."""
        if self.exact is not None:
            return [mpmath.mpmathify(q) for q in self.exact]
        return [mpf(p) for p in self.points]

    def ensure_exact(self) -> "PointConfig":
        """Promote float nodes to the exact binary rationals they already are."""
        if self.exact is not None:
            return self
        return PointConfig(self.points, tuple(Fraction(p) for p in self.points))

    def scaled(self, c: Scalar) -> "PointConfig":
        """Configuration with every node multiplied by ``c > 0``."""
        if not c > 0:
            raise ValueError("scale factor must be positive")
        exact = None
        if self.exact is not None and isinstance(c, Rational):
            exact = tuple(q * Fraction(c) for q in self.exact)
        return PointConfig(tuple(float(c) * p for p in self.points), exact)


def make_point_config(values: Sequence[Scalar]) -> PointConfig:
    """Validate and pack nodes; exact rationals are kept when every input is rational.

    Rejects non-positive entries, duplicates, and out-of-order input: the
    caller must intend the ordering, silently sorting would hide mistakes.
    """
    vals = list(values)
    if not vals:
        raise ValueError("at least one point is required")
    for v in vals:
        if not v > 0:
            raise ValueError(f"points must be strictly positive, got {v!r}")
    for a, b in zip(vals, vals[1:]):
        if a == b:
            raise ValueError(f"duplicate point {a!r}: points must be strictly increasing")
        if a > b:
            raise ValueError("points must be given in strictly increasing order")
    exact = None
    if all(isinstance(v, Rational) for v in vals):
        exact = tuple(Fraction(v) for v in vals)
    return PointConfig(tuple(float(v) for v in vals), exact)


@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix; entries mirror each other exactly."""

    order: int
    entries: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.entries) != self.order or any(len(row) != self.order for row in self.entries):
            raise ValueError("entries must form an order x order square")
        for i in range(self.order):
            for j in range(i + 1, self.order):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")

    @classmethod
    def from_rows(cls, rows) -> "SymMatrix":
        return cls(len(rows), tuple(tuple(row) for row in rows))

    @classmethod
    def build(cls, n: int, entry) -> "SymMatrix":
        """Symmetric-by-construction: ``entry(i, j)`` evaluated only for i <= j."""
        rows = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = entry(i, j)
                rows[i][j] = v
                rows[j][i] = v
        return cls(n, tuple(tuple(row) for row in rows))

    @classmethod
    def diagonal(cls, values, zero=0) -> "SymMatrix":
        vals = list(values)
        n = len(vals)
        return cls(n, tuple(
            tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)
        ))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list]:
        """Mutable copy of the entries."""
        return [list(row) for row in self.entries]

    def is_exact(self) -> bool:
        """True when every entry is a rational number (int or Fraction)."""
        return all(isinstance(e, Rational) for row in self.entries for e in row)

    def max_abs(self):
        return max(abs(e) for row in self.entries for e in row)

    def to_mp(self) -> mpmath.matrix:
        """mpmath matrix of the entries at the current working precision."""
        M = mpmath.matrix(self.order, self.order)
        for i in range(self.order):
            for j in range(self.order):
                M[i, j] = to_mpf(self.entries[i][j])
        return M
