"""Strict and almost strict convexity certifiers based on chords and subgradients.

A strict claim is judged per sample with :func:`judge_strict`: slack within
roundoff of zero (``eq_rel`` times the magnitude of the values involved)
refutes, slack above ``strict_margin`` supports, anything between leaves the
verdict undecided.  A near-zero chord slack is reported
with an ``AFFINE_SEGMENT`` witness when the function is affine (within the
equality band) along the whole sampled segment.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..core.blackbox import BlackBoxConvex, Box, Region, make_rng
from ..core.pl import PLConvex1D, pl_eval, pl_eval_array, pl_subdiff
from ..core.tolerance import (DEFAULT_TOL, PLUS_INFINITY, Status, Tolerance, Verdict, judge_strict,
                              judge_strict_array)
from ..errors import EmptySampleRegion, NotAffineOnSegment, SubgradientUnavailable
from .witness import SegmentWitness, WitnessKind

AFFINITY_POINTS = 9


def pl_as_blackbox(f: PLConvex1D, name: str = "") -> BlackBoxConvex:
    """View a PL function as a 1-D black box with a multivalued subgradient oracle."""
    ff = f.to_float()
    dom = ff.domain
    # unbounded sides are clipped to a window around the breakpoints
    width = 10.0 + max(abs(float(ff.breakpoints[0])), abs(float(ff.breakpoints[-1])))
    lo, hi = float(max(dom.lo, -width)), float(min(dom.hi, width))

    def func(X):
        return pl_eval_array(ff, np.asarray(X, dtype=float)[:, 0])

    def subgrad(x):
        ivl = pl_subdiff(ff, float(x[0]))
        return [np.array([v]) for v in ivl.representatives()]

    region = Box([lo], [hi], boundary_weight=0.05)
    return BlackBoxConvex(1, func, subgrad=subgrad, domain=region, subdiff_domain=region, vectorized=True,
                          name=name)


def _scale(*vals):
    m = 0.0
    for v in vals:
        v = np.abs(np.asarray(v, dtype=float))
        v = v[np.isfinite(v)]
        if v.size:
            m = max(m, float(v.max()))
    return m


def _segment_profile(f: BlackBoxConvex, x0, x1, n=AFFINITY_POINTS):
    ts = np.linspace(0.0, 1.0, n)
    pts = x0[None, :] + ts[:, None] * (x1 - x0)[None, :]
    return ts, f.values(pts)


def _is_affine(ts, vals, tol):
    if not np.all(np.isfinite(vals)):
        return False
    chord = (1 - ts) * vals[0] + ts * vals[-1]
    return bool(np.all(np.abs(vals - chord) <= tol.eq_tol(_scale(vals))))


def _refutation(f, x0, x1, lam, slack, tol):
    """Witness for a failed strict chord at ``lam x0 + (1 - lam) x1``."""
    ts, vals = _segment_profile(f, x0, x1)
    kind = WitnessKind.AFFINE_SEGMENT if _is_affine(ts, vals, tol) else WitnessKind.STRICTNESS_FAIL
    return SegmentWitness(x0, x1, kind, float(lam), float(slack), ts.tolist(), vals.tolist()).to_dict()


def certify_strict_convexity_sampled(f: BlackBoxConvex, region: Optional[Region] = None, n_triples: int = 1000,
                                     seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Sampled strict Jensen inequality ``f(lam x + (1-lam) y) < lam f(x) + (1-lam) f(y)``.

    Triples with ``x == y`` or an infinite endpoint value carry no
    information and are not counted.

    Raises
    ------
    EmptySampleRegion
        If no informative triple was drawn.
    """
    if n_triples < 1:
        raise ValueError("n_triples must be >= 1")
    region = region or f.sampling_region()
    rng = make_rng(seed)
    x, y = region.sample_segments(rng, n_triples)
    lam = rng.random(n_triples)
    lam = np.where((lam <= 0) | (lam >= 1), 0.5, lam)
    fx, fy = f.values(x), f.values(y)
    z = lam[:, None] * x + (1 - lam[:, None]) * y
    fz = f.values(z)
    informative = np.any(x != y, axis=1) & np.isfinite(fx) & np.isfinite(fy)
    used = int(informative.sum())
    if used == 0:
        raise EmptySampleRegion("no sampled triple has distinct endpoints inside dom f")
    with np.errstate(invalid="ignore"):
        slack = lam * fx + (1 - lam) * fy - fz
    margin = float(np.min(slack[informative]))
    rows = np.flatnonzero(informative)
    scale = np.max(np.abs(np.where(np.isfinite(np.c_[fx, fy, fz]), np.c_[fx, fy, fz], 0.0)), axis=1)[rows]
    first, undecided = judge_strict_array(slack[rows], tol, scale)
    if first is not None:
        k = rows[first]
        return Verdict(Status.REFUTED, _refutation(f, x[k], y[k], lam[k], slack[k], tol),
                       samples_used=used, margin=margin)
    status = Status.INCONCLUSIVE if undecided else Status.CERTIFIED
    return Verdict(status, samples_used=used, margin=margin)


def certify_strict_convexity_pl(f: PLConvex1D) -> Verdict:
    """Exact verdict for a PL function: strictly convex only when ``dom f`` is a point.

    Otherwise an affine piece of ``dom f`` is returned as witness: the first
    bounded piece between kinks, else the right tail, else the left tail
    (unbounded pieces are cut to unit length).
    """
    f = f.canonical()
    xs = f.breakpoints
    if len(xs) >= 2:
        x0, x1 = xs[0], xs[1]
    elif math.isfinite(f.slopes[-1]):
        x0, x1 = xs[-1], xs[-1] + 1
    elif math.isfinite(f.slopes[0]):
        x0, x1 = xs[0] - 1, xs[0]
    else:
        return Verdict.exact(Status.CERTIFIED, reason="dom f is a single point")
    v0, v1 = pl_eval(f, x0), pl_eval(f, x1)
    w = SegmentWitness([float(x0)], [float(x1)], WitnessKind.AFFINE_SEGMENT, 0.5, 0.0,
                       [0.0, 0.5, 1.0], [float(v0), float(pl_eval(f, (x0 + x1) / 2)), float(v1)])
    return Verdict.exact(Status.REFUTED, witness=w.to_dict(), reason="f is affine on a piece of its domain")


def _hessians(hess, X):
    try:
        H = np.asarray(hess(X), dtype=float)
        if H.shape == (len(X), X.shape[1], X.shape[1]):
            return H
    except Exception:  # pointwise oracle
        pass
    return np.array([np.asarray(hess(x), dtype=float).reshape(X.shape[1], X.shape[1]) for x in X])


def flat_direction_probes(f: BlackBoxConvex, region: Region, n_points: int = 32, seed: int = 0,
                          tol: Tolerance = DEFAULT_TOL, points=None):
    """Short segments along near-null Hessian directions at sampled points.

    Random segments almost never align with a thin set of flat directions
    (the kernel of a rank-deficient Hessian, say), so certifiers add these
    probes whenever ``f`` has a Hessian oracle.  Each probe is centred at a
    sampled point whose smallest Hessian eigenvalue is within the equality
    band, points along the matching eigenvector and stays inside one
    convex component of ``region``.

    Parameters
    ----------
    points : array_like, optional
        Probe centres to use instead of ``n_points`` samples of ``region``.

    Returns
    -------
    x0, x1 : ndarray
        Probe endpoints, shape ``(k, dim)`` (``k`` may be zero).
    """
    empty = np.empty((0, f.dim)), np.empty((0, f.dim))
    if f.hess is None:
        return empty
    rng = make_rng(seed, 5)
    P = region.sample(rng, n_points)
    if points is not None:
        P = np.asarray(points, dtype=float).reshape(-1, f.dim)
    a, b = region.sample_segments(rng, n_points)
    length = 0.1 * float(np.median(np.linalg.norm(a - b, axis=1)))
    if not length > 0:
        return empty
    with np.errstate(all="ignore"):
        H = _hessians(f.hess, P)
    x0, x1 = [], []
    for p, h in zip(P, H):
        if not np.all(np.isfinite(h)):
            continue
        w, V = np.linalg.eigh((h + h.T) / 2)
        if w[0] > tol.eq_abs + tol.eq_rel * np.abs(w).max():
            continue
        d = V[:, 0]
        comps = [c for c in region.components() if c._contains_convex(p)]
        step = length
        for _ in range(6):
            lo, hi = p - step * d, p + step * d
            if any(c._contains_convex(lo) and c._contains_convex(hi) for c in comps):
                x0.append(lo)
                x1.append(hi)
                break
            step /= 2
    if not x0:
        return empty
    return np.array(x0), np.array(x1)


def certify_almost_strict_convexity(f: BlackBoxConvex, subdiff_region: Optional[Region] = None,
                                    n_segments: int = 500, seed: int = 0, tol: Tolerance = DEFAULT_TOL,
                                    n_points: int = 33) -> Verdict:
    """Strict chord test along sampled segments of ``dom ∂f``.

    Each segment is cut at ``n_points`` equally spaced parameters and every
    interior point is compared with the chord through the endpoints.
    ``subdiff_region`` must lie in ``dom ∂f``; segments are drawn inside one
    convex component at a time.
    """
    if n_segments < 1:
        raise ValueError("n_segments must be >= 1")
    region = subdiff_region or f.subdiff_domain or f.sampling_region()
    rng = make_rng(seed)
    x0, x1 = region.sample_segments(rng, n_segments)
    p0, p1 = flat_direction_probes(f, region, seed=seed, tol=tol)
    x0, x1 = np.vstack([x0, p0]), np.vstack([x1, p1])
    keep = np.any(x0 != x1, axis=1)
    x0, x1 = x0[keep], x1[keep]
    if len(x0) == 0:
        return Verdict(Status.CERTIFIED, samples_used=0, reason="every sampled segment is a single point")
    ts = np.linspace(0.0, 1.0, n_points)
    pts = x0[:, None, :] + ts[None, :, None] * (x1 - x0)[:, None, :]
    vals = f.values(pts.reshape(-1, f.dim)).reshape(len(x0), n_points)
    chord = (1 - ts)[None, :] * vals[:, :1] + ts[None, :] * vals[:, -1:]
    with np.errstate(invalid="ignore"):
        slack = (chord - vals)[:, 1:-1]
    finite = np.all(np.isfinite(vals), axis=1)
    if not finite.any():
        raise EmptySampleRegion("no sampled segment lies inside dom f")
    margin = float(np.min(slack[finite]))
    rows = np.flatnonzero(finite)
    scale = np.array([_scale(vals[k]) for k in rows])
    sub = slack[rows]
    first, undecided = judge_strict_array(sub, tol, np.broadcast_to(scale[:, None], sub.shape))
    if first is not None:
        r, m = divmod(first, n_points - 2)
        k, t = rows[r], ts[m + 1]
        kind = WitnessKind.AFFINE_SEGMENT if _is_affine(ts, vals[k], tol) else WitnessKind.STRICTNESS_FAIL
        w = SegmentWitness(x0[k], x1[k], kind, float(1 - t), float(slack[k, m]), ts.tolist(), vals[k].tolist())
        return Verdict(Status.REFUTED, w.to_dict(), samples_used=int(finite.sum()), margin=margin)
    status = Status.INCONCLUSIVE if undecided else Status.CERTIFIED
    return Verdict(status, samples_used=int(finite.sum()), margin=margin,
                   details={"points_per_segment": n_points})


def subgradient_strict_inequality_check(f: BlackBoxConvex, region: Optional[Region] = None, n_pairs: int = 500,
                                        seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Sampled ``f(x1) > f(x0) + <v, x1 - x0>`` for ``v`` in ``∂f(x0)`` and ``x1 != x0``.

    Raises
    ------
    SubgradientUnavailable
        If ``f`` has no subgradient oracle or the oracle is empty at a
        sampled base point.
    """
    if not f.has_subgradients:
        raise SubgradientUnavailable(f"{f.name or 'function'} has no subgradient oracle")
    region = region or f.subdiff_domain or f.sampling_region()
    rng = make_rng(seed)
    X0, X1 = region.sample_segments(rng, n_pairs)
    f0, f1 = f.values(X0), f.values(X1)
    status, used, margin = Status.CERTIFIED, 0, PLUS_INFINITY
    for k in range(n_pairs):
        if not np.any(X0[k] != X1[k]) or not np.isfinite(f1[k]):
            continue
        vs = f.subgradients(X0[k])
        if not vs:
            raise SubgradientUnavailable(f"empty subdifferential at sampled point {X0[k].tolist()}")
        for v in vs:
            used += 1
            slack = f1[k] - f0[k] - float(v @ (X1[k] - X0[k]))
            margin = min(margin, slack)
            s = judge_strict(slack, tol, _scale(f0[k], f1[k], v @ (X1[k] - X0[k])))
            if s is Status.REFUTED:
                w = {"kind": WitnessKind.SUBGRADIENT_EQUALITY.value, "x0": X0[k].tolist(), "x1": X1[k].tolist(),
                     "v": v.tolist(), "f_x0": float(f0[k]), "f_x1": float(f1[k]), "slack": float(slack)}
                return Verdict(Status.REFUTED, w, samples_used=used, margin=margin)
            if s is Status.INCONCLUSIVE:
                status = Status.INCONCLUSIVE
    return Verdict(status, samples_used=used, margin=margin)


def _hausdorff(A, B):
    if not A and not B:
        return 0.0
    if not A or not B:
        return PLUS_INFINITY
    D = np.array([[np.linalg.norm(a - b) for b in B] for a in A])
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def _intersect_1d(A, B):
    lo = max(min(a[0] for a in A), min(b[0] for b in B))
    hi = min(max(a[0] for a in A), max(b[0] for b in B))
    if lo > hi:
        return []
    return [np.array([lo])] if lo == hi else [np.array([lo]), np.array([hi])]


def _intersect_sets(A, B, tol):
    return [a for a in A if any(np.linalg.norm(a - b) <= tol.eq_tol(np.linalg.norm(a)) for b in B)]


def affine_segment_subdiff_check(f: BlackBoxConvex, x0, x1, n_interior: int = 9,
                                 tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """On a segment where ``f`` is affine, interior subdifferentials equal ``∂f(x0) ∩ ∂f(x1)``.

    In one dimension the oracle's values are read as the endpoints of an
    interval and intersected as intervals; in higher dimension the sampled
    sets are intersected pointwise.  Sets are compared in Hausdorff
    distance.

    Raises
    ------
    NotAffineOnSegment
        If the chord test shows ``f`` is not affine on ``[x0, x1]``.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    ts, vals = _segment_profile(f, x0, x1, max(AFFINITY_POINTS, n_interior + 2))
    if not _is_affine(ts, vals, tol):
        raise NotAffineOnSegment(f"f is not affine on [{x0.tolist()}, {x1.tolist()}]")
    S0, S1 = f.subgradients(x0), f.subgradients(x1)
    target = _intersect_1d(S0, S1) if f.dim == 1 and S0 and S1 else _intersect_sets(S0, S1, tol)
    if f.dim == 1 and len(target) == 2:
        target_ivl = (target[0][0], target[1][0])
    worst = 0.0
    for t in np.arange(1, n_interior + 1) / (n_interior + 1):
        St = f.subgradients(x0 + t * (x1 - x0))
        if f.dim == 1 and len(target) == 2 and St:
            # compare intervals through their endpoints
            St = [np.array([min(s[0] for s in St)]), np.array([max(s[0] for s in St)])]
            d = max(abs(St[0][0] - target_ivl[0]), abs(St[1][0] - target_ivl[1]))
        else:
            d = _hausdorff(St, target)
        worst = max(worst, d)
        if d > tol.eq_tol(max([np.linalg.norm(s) for s in target] or [0.0])):
            w = {"kind": "SUBDIFF_MISMATCH", "x0": x0.tolist(), "x1": x1.tolist(), "t": float(t),
                 "interior": [s.tolist() for s in St], "intersection": [s.tolist() for s in target],
                 "hausdorff": d}
            return Verdict(Status.REFUTED, w, samples_used=n_interior, margin=-d)
    return Verdict(Status.CERTIFIED, samples_used=n_interior, margin=-worst,
                   details={"intersection": [s.tolist() for s in target]})
