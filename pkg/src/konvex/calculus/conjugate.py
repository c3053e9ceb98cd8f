"""Exact Fenchel conjugation of piecewise-linear functions and their graphs."""
from __future__ import annotations

import math

from ..core.pl import (MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE, Interval, PLConvex1D,
                       pl_subdiff)
from ..core.polyline import MonotonePolyline


def conjugate_pl(f: PLConvex1D) -> PLConvex1D:
    """Exact Fenchel conjugate ``f*(v) = sup_x (x v - f(x))``.

    The breakpoints of ``f*`` are the distinct finite slopes of ``f``; at a
    slope ``s`` attained in ``∂f(x_i)`` the value is ``s x_i - f(x_i)``.
    A bounded side of ``dom f`` becomes a finite tail slope of ``f*`` and a
    finite tail slope of ``f`` becomes a side of ``dom f*``.  Repeated slopes
    (affine pieces) give one dual breakpoint, so ``conjugate_pl`` applied
    twice returns ``f`` up to removal of non-kink breakpoints.

    Examples
    --------
    >>> f = PLConvex1D((-1, 0, 1), (1, 0, 1), -1, 1)   # |x|
    >>> conjugate_pl(f).domain
    Interval(lo=-1, hi=1)
    """
    xs, vs, s = f.breakpoints, f.values, f.slopes
    pts = []
    for i in range(len(xs)):
        for t in (s[i], s[i + 1]):
            if math.isfinite(t) and (not pts or pts[-1][0] != t):
                pts.append((t, t * xs[i] - vs[i]))
    if not pts:
        # f is the indicator of {x_0} shifted by v_0: f* is linear with slope x_0
        zero = xs[0] * 0
        pts = [(zero, -vs[0])]
    left = xs[0] if f.left_tail is MINUS_INFINITY_SLOPE else MINUS_INFINITY_SLOPE
    right = xs[-1] if f.right_tail is PLUS_INFINITY_SLOPE else PLUS_INFINITY_SLOPE
    return PLConvex1D(tuple(p[0] for p in pts), tuple(p[1] for p in pts), left, right)


def conjugate_graph(g: MonotonePolyline) -> MonotonePolyline:
    """Graph of the inverse operator: swap the coordinates of every vertex and ray.

    For ``g = gra ∂f`` this is ``gra ∂f*``.
    """
    return g.swap()


def tilt_map(f: PLConvex1D, xstar) -> Interval:
    """Minimizers of ``x -> f(x) - xstar * x``, computed as ``∂f*(xstar)``.

    An empty interval means the tilted function has no minimizer (it is
    unbounded below or its infimum is not attained).
    """
    return pl_subdiff(conjugate_pl(f), xstar)
