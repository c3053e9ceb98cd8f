"""Maximal monotone graphs in the plane, stored as polylines with end rays.

The curve is ``head ∪ [v_0, v_1] ∪ ... ∪ [v_{k-1}, v_k] ∪ tail`` where the
head is ``{v_0 - t d_head : t >= 0}`` and the tail ``{v_k + t d_tail : t >= 0}``.
Both directions have nonnegative components, so the whole curve is
componentwise nondecreasing and unbounded at both ends, hence maximal
monotone as a subset of ``R x R``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import AnchorOutsideDomain
from .pl import (MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE, Interval, PLConvex1D)

HORIZONTAL = (1, 0)
VERTICAL = (0, 1)


@dataclass(frozen=True)
class MonotonePolyline:
    vertices: tuple
    head_ray: tuple
    tail_ray: tuple

    def __post_init__(self):
        verts = tuple(tuple(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "head_ray", tuple(self.head_ray))
        object.__setattr__(self, "tail_ray", tuple(self.tail_ray))
        if not verts:
            raise ValueError("a polyline needs at least one vertex")
        if any(len(v) != 2 for v in verts):
            raise ValueError("vertices must be planar points")
        for ray in (self.head_ray, self.tail_ray):
            if len(ray) != 2 or ray[0] < 0 or ray[1] < 0 or (ray[0] == 0 and ray[1] == 0):
                raise ValueError(f"ray directions need nonnegative, not both zero, components: {ray}")
        for (xa, ya), (xb, yb) in zip(verts[:-1], verts[1:]):
            if xb < xa or yb < ya:
                raise ValueError("vertices must be componentwise nondecreasing")
            if xa == xb and ya == yb:
                raise ValueError("consecutive vertices must differ")

    @property
    def x_range(self) -> Interval:
        """Projection of the graph onto the first axis (``dom A``)."""
        lo = -math.inf if self.head_ray[0] > 0 else self.vertices[0][0]
        hi = math.inf if self.tail_ray[0] > 0 else self.vertices[-1][0]
        return Interval(lo, hi)

    def values(self, x) -> Interval:
        """The section ``A(x) = {y : (x, y) on the curve}``."""
        return polyline_values(self, x)

    def swap(self) -> "MonotonePolyline":
        """Graph of the inverse operator."""
        return MonotonePolyline(tuple((y, x) for x, y in self.vertices),
                                self.head_ray[::-1], self.tail_ray[::-1])


def _parallel(d1, d2) -> bool:
    return d1[0] * d2[1] - d1[1] * d2[0] == 0


def _normalize(d):
    s = d[0] + d[1]
    return (d[0] / s, d[1] / s)


def canonicalize(g: MonotonePolyline) -> MonotonePolyline:
    """Drop collinear vertices and normalise ray directions.

    A single straight line keeps one vertex: the orthogonal projection of
    the origin onto it.  Two graphs describing the same set compare equal
    after canonicalization.
    """
    verts = g.vertices
    kept = []
    for i, v in enumerate(verts):
        prev = kept[-1] if kept else None
        din = g.head_ray if prev is None else (v[0] - prev[0], v[1] - prev[1])
        dout = g.tail_ray if i == len(verts) - 1 else (verts[i + 1][0] - v[0], verts[i + 1][1] - v[1])
        if not _parallel(din, dout):
            kept.append(v)
    head, tail = _normalize(g.head_ray), _normalize(g.tail_ray)
    if not kept:
        p, d = verts[0], head
        t = (p[0] * d[0] + p[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])
        kept = [(p[0] - t * d[0], p[1] - t * d[1])]
    return MonotonePolyline(tuple(kept), head, tail)


def polyline_values(g: MonotonePolyline, x) -> Interval:
    verts = g.vertices
    lo, hi = math.inf, -math.inf

    def hit(a, b):
        nonlocal lo, hi
        lo, hi = min(lo, a), max(hi, b)

    x0, y0 = verts[0]
    dx, dy = g.head_ray
    if dx == 0 and x == x0:
        hit(-math.inf, y0)
    elif dx > 0 and x <= x0:
        yy = y0 - (x0 - x) * dy / dx
        hit(yy, yy)
    for (xa, ya), (xb, yb) in zip(verts[:-1], verts[1:]):
        if xa == xb == x:
            hit(ya, yb)
        elif xa <= x <= xb and xa < xb:
            yy = ya + (yb - ya) * (x - xa) / (xb - xa)
            hit(yy, yy)
    xk, yk = verts[-1]
    dx, dy = g.tail_ray
    if dx == 0 and x == xk:
        hit(yk, math.inf)
    elif dx > 0 and x >= xk:
        yy = yk + (x - xk) * dy / dx
        hit(yy, yy)
    return Interval(lo, hi) if lo <= hi else Interval.empty()


def pl_to_polyline(f: PLConvex1D) -> MonotonePolyline:
    """Graph of the subdifferential of ``f``.

    Kinks become vertical segments ``{x_i} x [L_i, R_i]`` and affine pieces
    horizontal segments at the piece slope.  Infinite tail slopes become
    vertical rays.
    """
    s = f.slopes
    verts = []
    for i, x in enumerate(f.breakpoints):
        left, right = s[i], s[i + 1]
        pts = [y for y in (left, right) if math.isfinite(y)]
        if not pts:
            pts = [x * 0]
        for y in pts:
            if not verts or verts[-1] != (x, y):
                verts.append((x, y))
    head = VERTICAL if f.left_tail is MINUS_INFINITY_SLOPE else HORIZONTAL
    tail = VERTICAL if f.right_tail is PLUS_INFINITY_SLOPE else HORIZONTAL
    return MonotonePolyline(tuple(verts), head, tail)


def _segment_integral(xa, ya, xb, yb):
    return (xb - xa) * (ya + yb) / 2


def polyline_to_pl(g: MonotonePolyline, anchor_x, anchor_value) -> PLConvex1D:
    """Integrate a monotone graph to a convex potential with ``f(anchor_x) = anchor_value``.

    Staircase graphs (only horizontal and vertical pieces) are reproduced
    exactly, i.e. the subdifferential graph of the result equals ``g``.
    Sloped pieces yield the chordal interpolant of the exact potential at the
    vertex abscissae, and a sloped end ray is replaced by the tangent line at
    its vertex.

    Raises
    ------
    AnchorOutsideDomain
        If ``anchor_x`` is not in the projection of ``g`` on the first axis.
    """
    if not g.x_range.contains(anchor_x):
        raise AnchorOutsideDomain(f"anchor {anchor_x!r} outside dom A = [{g.x_range.lo}, {g.x_range.hi}]")
    verts = g.vertices
    xs, pot = [verts[0][0]], [verts[0][0] * 0]
    for (xa, ya), (xb, yb) in zip(verts[:-1], verts[1:]):
        if xb > xa:
            xs.append(xb)
            pot.append(pot[-1] + _segment_integral(xa, ya, xb, yb))

    # potential at the anchor, relative to pot[0] = F(x_first)
    x0, y0 = verts[0]
    if anchor_x < x0:
        dx, dy = g.head_ray
        ya = y0 - (x0 - anchor_x) * dy / dx
        f_anchor = -_segment_integral(anchor_x, ya, x0, y0)
    elif anchor_x > verts[-1][0]:
        xk, yk = verts[-1]
        dx, dy = g.tail_ray
        yb = yk + (anchor_x - xk) * dy / dx
        f_anchor = pot[-1] + _segment_integral(xk, yk, anchor_x, yb)
    else:
        f_anchor = None
        for (xa, ya), (xb, yb) in zip(verts[:-1], verts[1:]):
            if xa < xb and xa <= anchor_x <= xb:
                j = xs.index(xa)
                ym = ya + (yb - ya) * (anchor_x - xa) / (xb - xa)
                f_anchor = pot[j] + _segment_integral(xa, ya, anchor_x, ym)
                break
        if f_anchor is None:
            f_anchor = pot[xs.index(anchor_x)]
    shift = anchor_value - f_anchor
    values = tuple(p + shift for p in pot)
    # pin the anchor exactly when it is a breakpoint
    if anchor_x in xs:
        values = tuple(anchor_value if x == anchor_x else v for x, v in zip(xs, values))
    left = MINUS_INFINITY_SLOPE if g.head_ray[0] == 0 else verts[0][1]
    right = PLUS_INFINITY_SLOPE if g.tail_ray[0] == 0 else verts[-1][1]
    return PLConvex1D(tuple(xs), values, left, right)
