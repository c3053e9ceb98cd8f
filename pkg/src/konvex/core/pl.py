"""Exact piecewise-linear convex functions on the real line.

A :class:`PLConvex1D` is given by breakpoints ``x_0 < ... < x_m`` with values
``f(x_i)``, linear interpolation in between and a tail slope on each side.
A tail slope may be the sentinel :data:`MINUS_INFINITY_SLOPE` (left) or
:data:`PLUS_INFINITY_SLOPE` (right), meaning ``f = +inf`` beyond the outer
breakpoint.  All arithmetic is generic, so coordinates given as
:class:`fractions.Fraction` are handled exactly.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Sequence, Union

import numpy as np

from .tolerance import PLUS_INFINITY


class InfiniteSlope(enum.Enum):
    MINUS = "-inf"
    PLUS = "inf"

    def __repr__(self):
        return f"{self.name}_INFINITY_SLOPE"

    def __float__(self):
        return -math.inf if self is InfiniteSlope.MINUS else math.inf


MINUS_INFINITY_SLOPE = InfiniteSlope.MINUS
PLUS_INFINITY_SLOPE = InfiniteSlope.PLUS

TailSlope = Union[Real, InfiniteSlope]


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` of reals, possibly unbounded or empty."""

    lo: object
    hi: object

    @classmethod
    def empty(cls) -> "Interval":
        return cls(math.inf, -math.inf)

    @classmethod
    def point(cls, v) -> "Interval":
        return cls(v, v)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return not self.is_empty and math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, v, tol=0) -> bool:
        if self.is_empty:
            return False
        if not tol:
            # keep rational endpoints exact
            return self.lo <= v <= self.hi
        return self.lo - tol <= v <= self.hi + tol

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else Interval.empty()

    def representatives(self, spread=1.0) -> list:
        """A finite sample of the interval: its finite ends, or nearby points."""
        if self.is_empty:
            return []
        if self.is_singleton:
            return [self.lo]
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            return [-spread, spread]
        if math.isinf(lo):
            return [hi - spread, hi]
        if math.isinf(hi):
            return [lo, lo + spread]
        return [lo, hi]

    def __iter__(self):
        yield self.lo
        yield self.hi


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


@dataclass(frozen=True)
class PLConvex1D:
    """A proper lsc convex piecewise-linear function on R.

    Parameters
    ----------
    breakpoints : sequence of reals
        Strictly increasing abscissae ``x_0 < ... < x_m`` (at least one).
    values : sequence of reals
        Finite values ``f(x_i)``.
    left_tail, right_tail : real or InfiniteSlope
        Slopes of the affine extensions left of ``x_0`` and right of ``x_m``.
        ``MINUS_INFINITY_SLOPE`` on the left (``PLUS_INFINITY_SLOPE`` on the
        right) means the function is ``+inf`` there.

    Raises
    ------
    ValueError
        If the data do not describe a convex function.
    """

    breakpoints: tuple
    values: tuple
    left_tail: TailSlope
    right_tail: TailSlope

    def __post_init__(self):
        bps = tuple(self.breakpoints)
        vals = tuple(self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) == 0 or len(bps) != len(vals):
            raise ValueError("need one value per breakpoint and at least one breakpoint")
        for v in bps + vals:
            if isinstance(v, InfiniteSlope) or not math.isfinite(v):
                raise ValueError("breakpoints and values must be finite")
        if any(b >= a for a, b in zip(bps[1:], bps[:-1])):
            raise ValueError("breakpoints must be strictly increasing")
        if self.left_tail is PLUS_INFINITY_SLOPE or self.right_tail is MINUS_INFINITY_SLOPE:
            raise ValueError("left tail may only be -inf sentinel, right tail only +inf sentinel")
        for t in (self.left_tail, self.right_tail):
            if not isinstance(t, InfiniteSlope) and not math.isfinite(t):
                raise ValueError("finite tail slopes must be finite numbers; use the sentinels")
        s = self.slopes
        for a, b in zip(s[:-1], s[1:]):
            tol = 0 if (_is_exact(a) and _is_exact(b)) else 1e-9 * (1 + abs(float(a)) + abs(float(b)))
            if math.isfinite(a) and math.isfinite(b) and b < a - tol:
                raise ValueError(f"slopes must be nondecreasing (convexity); got {a} then {b}")

    # -- derived data ---------------------------------------------------

    @cached_property
    def secants(self) -> tuple:
        x, v = self.breakpoints, self.values
        return tuple((v[i + 1] - v[i]) / (x[i + 1] - x[i]) for i in range(len(x) - 1))

    @cached_property
    def slopes(self) -> tuple:
        """``(L_0, s_0, ..., s_{m-1}, R_m)`` with infinite tails as ``±inf`` floats."""
        lt = -math.inf if self.left_tail is MINUS_INFINITY_SLOPE else self.left_tail
        rt = math.inf if self.right_tail is PLUS_INFINITY_SLOPE else self.right_tail
        return (lt,) + self.secants + (rt,)

    @property
    def m(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def domain(self) -> Interval:
        lo = self.breakpoints[0] if self.left_tail is MINUS_INFINITY_SLOPE else -math.inf
        hi = self.breakpoints[-1] if self.right_tail is PLUS_INFINITY_SLOPE else math.inf
        return Interval(lo, hi)

    def slope_interval_at(self, i: int) -> Interval:
        """Subdifferential at breakpoint ``i``."""
        s = self.slopes
        return Interval(s[i], s[i + 1])

    @property
    def is_exact(self) -> bool:
        nums = self.breakpoints + self.values + tuple(
            t for t in (self.left_tail, self.right_tail) if not isinstance(t, InfiniteSlope))
        return all(_is_exact(v) for v in nums)

    def rational(self) -> "PLConvex1D":
        """Copy with every coordinate converted to an exact ``Fraction``."""
        conv = lambda t: t if isinstance(t, InfiniteSlope) else Fraction(t)  # noqa: E731
        return PLConvex1D(tuple(map(Fraction, self.breakpoints)), tuple(map(Fraction, self.values)),
                          conv(self.left_tail), conv(self.right_tail))

    def to_float(self) -> "PLConvex1D":
        conv = lambda t: t if isinstance(t, InfiniteSlope) else float(t)  # noqa: E731
        return PLConvex1D(tuple(map(float, self.breakpoints)), tuple(map(float, self.values)),
                          conv(self.left_tail), conv(self.right_tail))

    def canonical(self) -> "PLConvex1D":
        """Equivalent representation keeping only genuine kinks.

        A function without kinks (affine on R) is anchored at ``x = 0``.
        """
        s = self.slopes
        keep = [i for i in range(self.m + 1) if s[i] != s[i + 1]]
        if not keep:
            zero = self.breakpoints[0] * 0
            return PLConvex1D((zero,), (pl_eval(self, zero),), self.left_tail, self.right_tail)
        return PLConvex1D(tuple(self.breakpoints[i] for i in keep),
                          tuple(self.values[i] for i in keep), self.left_tail, self.right_tail)

    def shift(self, c) -> "PLConvex1D":
        return PLConvex1D(self.breakpoints, tuple(v + c for v in self.values),
                          self.left_tail, self.right_tail)

    # -- evaluation -----------------------------------------------------

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return pl_eval_array(self, x)
        return pl_eval(self, x)

    def subdiff(self, x) -> Interval:
        return pl_subdiff(self, x)

    def is_strictly_convex(self) -> bool:
        """Exact negative oracle: only single-point domains are strictly convex."""
        dom = self.domain
        return dom.lo == dom.hi


def pl_eval(f: PLConvex1D, x):
    """Evaluate ``f`` at a scalar ``x``; returns ``+inf`` outside ``dom f``."""
    xs, vs = f.breakpoints, f.values
    if x < xs[0]:
        if f.left_tail is MINUS_INFINITY_SLOPE:
            return PLUS_INFINITY
        return vs[0] + f.left_tail * (x - xs[0])
    if x > xs[-1]:
        if f.right_tail is PLUS_INFINITY_SLOPE:
            return PLUS_INFINITY
        return vs[-1] + f.right_tail * (x - xs[-1])
    i = bisect.bisect_left(xs, x)
    if xs[i] == x:
        return vs[i]
    return vs[i - 1] + f.secants[i - 1] * (x - xs[i - 1])


def pl_eval_array(f: PLConvex1D, x) -> np.ndarray:
    """Vectorised float evaluation of ``f``."""
    x = np.asarray(x, dtype=float)
    xs = np.asarray(f.breakpoints, dtype=float)
    vs = np.asarray(f.values, dtype=float)
    out = np.interp(x, xs, vs)
    left, right = x < xs[0], x > xs[-1]
    if f.left_tail is MINUS_INFINITY_SLOPE:
        out[left] = np.inf
    else:
        out[left] = vs[0] + float(f.left_tail) * (x[left] - xs[0])
    if f.right_tail is PLUS_INFINITY_SLOPE:
        out[right] = np.inf
    else:
        out[right] = vs[-1] + float(f.right_tail) * (x[right] - xs[-1])
    return out


def pl_subdiff(f: PLConvex1D, x) -> Interval:
    """Subdifferential of ``f`` at ``x`` as a (possibly empty or unbounded) interval."""
    xs = f.breakpoints
    s = f.slopes
    if not f.domain.contains(x):
        return Interval.empty()
    if x < xs[0]:
        return Interval.point(s[0])
    if x > xs[-1]:
        return Interval.point(s[-1])
    i = bisect.bisect_left(xs, x)
    if xs[i] == x:
        return Interval(s[i], s[i + 1])
    return Interval.point(s[i])


def pl_from_points(points: Sequence, left_tail: TailSlope, right_tail: TailSlope) -> PLConvex1D:
    """Build from ``(x, f(x))`` pairs."""
    xs, vs = zip(*points)
    return PLConvex1D(tuple(xs), tuple(vs), left_tail, right_tail)
