"""Equivalence suites for function fixtures and the unique-minimizer check.

A function fixture is any object with ``name``, ``kind`` (``"pl"`` or
``"blackbox"``), ``function``, ``truth`` (a dict of declared properties),
``blackbox()`` returning a :class:`BlackBoxConvex` view, and the regions
``subdiff_region`` and ``domain_region``.  Reports are plain dicts ready for
JSON: ``{suite, fixture, conditions: [{name, verdict, margin, witness}],
agreement, expected, coherent}``.  Undecided verdicts never count as
agreement.
"""
from __future__ import annotations

import math

import numpy as np

from ..calculus.envelope import moreau_envelope_pl_array, prox_pl_array
from ..core.blackbox import BlackBoxConvex, Box, make_rng
from ..core.pl import PLConvex1D, pl_subdiff
from ..core.serialize import to_jsonable
from ..core.tolerance import (DEFAULT_TOL, PLUS_INFINITY, Status, Tolerance, Verdict, cosine, judge_strict_array)
from ..errors import MinimizationDiverged
from ..monotone import FiniteOperatorGraph, OperatorOracle, check_strictly_monotone, check_strictly_nonexpansive
from .convexity import (certify_almost_strict_convexity, certify_strict_convexity_pl,
                        certify_strict_convexity_sampled, flat_direction_probes, pl_as_blackbox)
from .numeric import _grad, batched_newton, envelope_blackbox, prox_blackbox, scipy_minimize


def condition_entry(name: str, v: Verdict) -> dict:
    return to_jsonable({"name": name, "verdict": v.label(), "status": v.status.value, "margin": v.margin,
                        "samples_used": v.samples_used, "witness": v.witness})


def _expected_status(truth: dict, key: str):
    label = truth.get(key)
    if label is True:
        return Status.CERTIFIED
    if label is False:
        return Status.REFUTED
    return None


def _agreement(verdicts):
    statuses = {v.status for v in verdicts}
    return Status.INCONCLUSIVE not in statuses and len(statuses) == 1


def _report(suite, fixture_name, named, expected, context=(), params=None):
    verdicts = [v for _, v in named]
    agreement = _agreement(verdicts)
    coherent = agreement and (expected is None or verdicts[0].status is expected)
    return to_jsonable({
        "suite": suite,
        "fixture": fixture_name,
        "conditions": [condition_entry(n, v) for n, v in named],
        "context": [condition_entry(n, v) for n, v in context],
        "agreement": agreement,
        "expected": None if expected is None else expected.value,
        "coherent": coherent,
        "params": params or {},
    })


# -- monotonicity of the subdifferential ----------------------------------------


def segment_strict_monotonicity(f: BlackBoxConvex, region, n_segments: int = 200, n_points: int = 9,
                                seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Strict monotonicity of ``∂f`` on sampled segments (convex subsets) of ``dom ∂f``.

    Along a segment the strict inequality for all pairs follows from the one
    for consecutive sample points, so only those are compared.
    """
    rng = make_rng(seed, 1)
    x0, x1 = region.sample_segments(rng, n_segments)
    p0, p1 = flat_direction_probes(f, region, seed=seed, tol=tol)
    x0, x1 = np.vstack([x0, p0]), np.vstack([x1, p1])
    ts = np.linspace(0.0, 1.0, n_points)
    used, margin, undecided_any = 0, PLUS_INFINITY, False
    for a, b in zip(x0, x1):
        d = b - a
        if not np.any(d != 0):
            continue
        layers = [f.subgradients(a + t * d) for t in ts]
        if any(not layer for layer in layers):
            continue
        used += 1
        ips, scales, where = [], [], []
        for m in range(n_points - 1):
            dx = (ts[m + 1] - ts[m]) * d
            for p in layers[m]:
                for q in layers[m + 1]:
                    ips.append(float(dx @ (q - p)))
                    scales.append(float(np.linalg.norm(dx) * np.linalg.norm(q - p)))
                    where.append((m, p, q))
        ips = np.asarray(ips)
        cos = cosine(ips, np.asarray(scales))
        margin = min(margin, float(cos.min()))
        first, undecided = judge_strict_array(cos, tol, 1.0)
        undecided_any |= undecided
        if first is not None:
            m, p, q = where[first]
            w = {"kind": "SEGMENT_STRICT_FAIL", "x0": a.tolist(), "x1": b.tolist(),
                 "point_a": (a + ts[m] * d).tolist(), "point_b": (a + ts[m + 1] * d).tolist(),
                 "v_a": p.tolist(), "v_b": q.tolist(), "inner_product": float(ips[first])}
            return Verdict(Status.REFUTED, w, samples_used=used, margin=margin)
    status = Status.INCONCLUSIVE if undecided_any else Status.CERTIFIED
    return Verdict(status, samples_used=used, margin=margin)


def subdifferential_graph(f: BlackBoxConvex, region, n_points: int = 150, seed: int = 0,
                          tol: Tolerance = DEFAULT_TOL) -> FiniteOperatorGraph:
    """Sampled ``gra ∂f`` over ``region`` using every value of the subgradient oracle.

    Endpoints of :func:`flat_direction_probes` are added to the sample.
    """
    pts = region.sample(make_rng(seed, 2), n_points)
    p0, p1 = flat_direction_probes(f, region, seed=seed, tol=tol)
    pts = np.vstack([pts, p0, p1])
    oracle = OperatorOracle(f.dim, f.subgradients, name=f.name)
    return oracle.graph(pts)


def theorem_almost_suite(fixture, tol: Tolerance = DEFAULT_TOL, seed: int = 0, n_segments: int = 400,
                         n_points: int = 150) -> dict:
    """Compare three conditions that coincide for convex functions.

    (a) almost strict convexity on sampled segments of ``dom ∂f``; (b) strict
    monotonicity of ``∂f`` on sampled segments of ``dom ∂f``; (c) strict
    monotonicity of ``∂f`` over a sampled graph.  Strict convexity over the
    fixture's sample of ``dom f`` is reported as context; it may fail while
    the three conditions hold.
    """
    f = fixture.blackbox()
    R = fixture.subdiff_region
    named = [
        ("almost_strictly_convex", certify_almost_strict_convexity(f, R, n_segments, seed, tol)),
        ("subdiff_strictly_monotone_on_segments",
         segment_strict_monotonicity(f, R, max(n_segments // 2, 1), seed=seed, tol=tol)),
        ("subdiff_strictly_monotone", check_strictly_monotone(subdifferential_graph(f, R, n_points, seed, tol), tol)),
    ]
    context = []
    if fixture.kind == "pl":
        context.append(("strictly_convex_exact", certify_strict_convexity_pl(fixture.function)))
    else:
        try:
            context.append(("strictly_convex_on_dom_f",
                            certify_strict_convexity_sampled(f, fixture.domain_region, 2 * n_segments, seed, tol)))
        except Exception as exc:  # context only; never part of the agreement
            context.append(("strictly_convex_on_dom_f",
                            Verdict(Status.INCONCLUSIVE, reason=f"{type(exc).__name__}: {exc}")))
    expected = _expected_status(fixture.truth, "almost_strictly_convex")
    return _report("t-almost", fixture.name, named, expected, context,
                   {"seed": seed, "n_segments": n_segments, "n_points": n_points})


# -- unique minimizer -----------------------------------------------------------


def _pl_descent(f: PLConvex1D, tilt: float, x: float, max_steps: int = 10_000):
    """Exact descent on ``f - tilt x`` moving between breakpoints; stops at stationarity."""
    xs = [float(b) for b in f.breakpoints]
    for _ in range(max_steps):
        ivl = pl_subdiff(f, x)
        lo, hi = ivl.lo - tilt, ivl.hi - tilt
        if lo <= 0 <= hi:
            return x
        if lo > 0:
            left = [b for b in xs if b < x]
            if not left:
                raise MinimizationDiverged(f"tilted function decreases without bound to the left of {x}")
            x = left[-1]
        else:
            right = [b for b in xs if b > x]
            if not right:
                raise MinimizationDiverged(f"tilted function decreases without bound to the right of {x}")
            x = right[0]
    raise MinimizationDiverged("descent did not reach a stationary point")


def unique_minimizer_check(fixture, tilts, tol: Tolerance = DEFAULT_TOL, n_starts: int = 16, seed: int = 0,
                           spread_tol: float = 1e-6) -> Verdict:
    """Minimize ``f - <x*, .>`` from ``n_starts`` sampled starts for every tilt ``x*``.

    All located minimizers of one tilt must lie within ``spread_tol`` of each
    other.  Tilts whose every run diverges have an empty argmin and are
    recorded, not refuted.
    """
    tilts = np.atleast_2d(np.asarray(tilts, dtype=float))
    rng = make_rng(seed, 3)
    spreads, empty = [], []
    if fixture.kind == "pl":
        f = fixture.function.to_float()
        region = pl_as_blackbox(f).subdiff_domain
        located = []
        for t in tilts:
            starts = region.sample(rng, n_starts)[:, 0]
            pts = []
            for s in starts:
                try:
                    pts.append([_pl_descent(f, float(t[0]), float(s))])
                except MinimizationDiverged:
                    pass
            located.append(np.asarray(pts).reshape(-1, 1))
    else:
        f = fixture.blackbox()
        region = fixture.subdiff_region
        starts = np.vstack([region.sample(rng, n_starts) for _ in tilts])
        b = np.repeat(tilts, n_starts, axis=0)
        if f.grad is not None and f.hess is not None:
            W, diverged = batched_newton(f, starts, b)
        else:
            W, diverged = np.empty_like(starts), np.zeros(len(starts), dtype=bool)
            for k, (s, bk) in enumerate(zip(starts, b)):
                try:
                    W[k] = scipy_minimize(f, s, bk)
                except MinimizationDiverged:
                    diverged[k] = True
        W, diverged = W.reshape(len(tilts), n_starts, -1), diverged.reshape(len(tilts), n_starts)
        located = [W[k][~diverged[k]] for k in range(len(tilts))]
    for k, pts in enumerate(located):
        if len(pts) == 0:
            empty.append(k)
            spreads.append(0.0)
            continue
        D = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        spread = float(D.max())
        spreads.append(spread)
        if spread > spread_tol:
            a, c = np.unravel_index(np.argmax(D), D.shape)
            w = {"kind": "DISTINCT_MINIMIZERS", "tilt": tilts[k].tolist(), "x_a": pts[a].tolist(),
                 "x_b": pts[c].tolist(), "distance": spread}
            return Verdict(Status.REFUTED, w, samples_used=len(tilts) * n_starts, margin=spread_tol - spread,
                           details={"empty_argmin_tilts": empty})
    return Verdict(Status.CERTIFIED, samples_used=len(tilts) * n_starts,
                   margin=spread_tol - max(spreads) if spreads else PLUS_INFINITY,
                   details={"max_spread": max(spreads) if spreads else 0.0, "empty_argmin_tilts": empty})


# -- envelope suite ---------------------------------------------------------------


def _pl_grid(f: PLConvex1D, lam, n=401):
    ff = f.to_float()
    slopes = [abs(s) for s in ff.slopes if math.isfinite(s)] or [0.0]
    reach = max(abs(float(ff.breakpoints[0])), abs(float(ff.breakpoints[-1]))) + lam * max(slopes) + 1.0
    return np.linspace(-1.5 * reach, 1.5 * reach, n)


def _grid_chord_verdict(xs, e, tol):
    """Strict midpoint test on consecutive grid triples (equally spaced grid)."""
    second = e[:-2] - 2 * e[1:-1] + e[2:]
    scale = np.max(np.abs(np.c_[e[:-2], e[1:-1], e[2:]]), axis=1)
    first, undecided = judge_strict_array(second / 2, tol, scale)
    margin = float(second.min() / 2)
    if first is not None:
        w = {"kind": "AFFINE_SEGMENT", "x0": [float(xs[first])], "x1": [float(xs[first + 2])], "lam": 0.5,
             "slack": float(second[first] / 2), "values": [float(e[first]), float(e[first + 1]), float(e[first + 2])]}
        return Verdict(Status.REFUTED, w, samples_used=len(second), margin=margin)
    return Verdict(Status.INCONCLUSIVE if undecided else Status.CERTIFIED, samples_used=len(second), margin=margin)


class _Prox:
    batched = True

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, X):
        return self.fn(X)


def _shifted_flat_probes(f: BlackBoxConvex, subdiff_region, lam, region, seed, tol):
    """Flat-direction probes of ``f`` moved by ``p -> p + lam ∇f(p)``, kept if both ends lie in ``region``.

    Probes are centred at prox points of samples of ``region`` so that the
    shifted segments land near those samples.
    """
    empty = np.empty((0, f.dim)), np.empty((0, f.dim))
    if f.grad is None or f.hess is None:
        return empty
    X = region.sample(make_rng(seed, 6), 32)
    P = prox_blackbox(f, X, lam)
    P = P[[subdiff_region.contains(p) for p in P]]
    if not len(P):
        return empty
    p0, p1 = flat_direction_probes(f, subdiff_region, seed=seed, tol=tol, points=P)
    if not len(p0):
        return empty
    q0, q1 = p0 + lam * _grad(f, p0), p1 + lam * _grad(f, p1)
    inside = np.array([region.contains(x) and region.contains(y) for x, y in zip(q0, q1)])
    return q0[inside], q1[inside]


def _probe_nonexpansive(verdict, f, qa, qb, lam, tol):
    Ta, Tb = prox_blackbox(f, qa, lam), prox_blackbox(f, qb, lam)
    dx = np.linalg.norm(qa - qb, axis=1)
    gaps = cosine(dx - np.linalg.norm(Ta - Tb, axis=1), dx)
    first, undecided = judge_strict_array(gaps, tol, 1.0)
    n = verdict.samples_used + len(gaps)
    margin = min(verdict.margin, float(gaps.min()))
    if first is not None:
        return Verdict(Status.REFUTED, {"kind": "NONEXPANSIVE_EQUALITY", "x": qa[first].tolist(),
                                        "y": qb[first].tolist(), "Tx": Ta[first].tolist(),
                                        "Ty": Tb[first].tolist(), "slack": float(gaps[first])},
                       samples_used=n, margin=margin)
    return Verdict(Status.INCONCLUSIVE if undecided else Status.CERTIFIED, samples_used=n, margin=margin)


def envelope_suite(target, lam: float, grid=None, tol: Tolerance = DEFAULT_TOL, seed: int = 0,
                   n_pairs: int = 200, n_segments: int = 120) -> dict:
    """Compare almost strict convexity of ``f``, strict convexity of ``e_lam f`` and strict nonexpansiveness of the prox.

    ``target`` is a :class:`PLConvex1D` (exact envelope and prox) or a
    function fixture (prox computed by local minimization).  For PL input
    the envelope is tested on consecutive triples of ``grid`` and the prox on
    consecutive grid pairs plus random grid pairs.
    """
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be finite and > 0, got {lam!r}")
    if isinstance(target, PLConvex1D) or getattr(target, "kind", None) == "pl":
        f = target if isinstance(target, PLConvex1D) else target.function
        name = getattr(target, "name", "inline")
        truth = getattr(target, "truth", {})
        ff = f.to_float()
        xs = np.asarray(grid if grid is not None else _pl_grid(ff, lam), dtype=float)
        i = certify_strict_convexity_pl(ff)
        e = moreau_envelope_pl_array(ff, lam, xs)
        ii = _grid_chord_verdict(xs, e, tol)
        region = Box([xs.min()], [xs.max()], boundary_weight=0.05)
        iii = check_strictly_nonexpansive(_Prox(lambda X: prox_pl_array(ff, lam, X[:, 0])[:, None]),
                                          region, n_pairs, seed, tol)
        # consecutive grid pairs: deterministic coverage of every grid cell
        p = prox_pl_array(ff, lam, xs)
        gaps = cosine(np.diff(xs) - np.abs(np.diff(p)), np.diff(xs))
        first, undecided = judge_strict_array(gaps, tol, 1.0)
        if iii.certified and first is not None:
            iii = Verdict(Status.REFUTED, {"kind": "NONEXPANSIVE_EQUALITY", "x": [float(xs[first])],
                                           "y": [float(xs[first + 1])], "Tx": [float(p[first])],
                                           "Ty": [float(p[first + 1])], "slack": float(gaps[first])},
                          samples_used=iii.samples_used + len(gaps), margin=min(iii.margin, float(gaps.min())))
        elif iii.certified and undecided:
            iii = Verdict(Status.INCONCLUSIVE, samples_used=iii.samples_used + len(gaps), margin=iii.margin)
        params = {"lambda": lam, "grid": [float(xs.min()), float(xs.max()), len(xs)], "seed": seed,
                  "n_pairs": n_pairs}
    else:
        name, truth = target.name, target.truth
        f = target.blackbox()
        i = certify_almost_strict_convexity(f, target.subdiff_region, n_segments, seed, tol)
        region = target.envelope_region
        rng = make_rng(seed, 4)
        a, b = region.sample_segments(rng, n_segments)
        # where f is flat along [p0, p1] with gradient v, e_lam f is affine on
        # [p0 + lam v, p1 + lam v] and the prox maps it back onto [p0, p1]
        qa, qb = _shifted_flat_probes(f, target.subdiff_region, lam, region, seed, tol)
        a, b = np.vstack([a, qa]), np.vstack([b, qb])
        keep = np.any(a != b, axis=1)
        a, b = a[keep], b[keep]
        ts = np.linspace(0.0, 1.0, 9)
        pts = (a[:, None, :] + ts[None, :, None] * (b - a)[:, None, :]).reshape(-1, f.dim)
        e, _ = envelope_blackbox(f, pts, lam)
        e = e.reshape(len(a), len(ts))
        slack = ((1 - ts)[None, :] * e[:, :1] + ts[None, :] * e[:, -1:] - e)[:, 1:-1]
        scale = np.broadcast_to(np.abs(e).max(axis=1)[:, None], slack.shape)
        first, undecided = judge_strict_array(slack, tol, scale)
        if first is not None:
            r, m = divmod(first, len(ts) - 2)
            w = {"kind": "AFFINE_SEGMENT", "x0": a[r].tolist(), "x1": b[r].tolist(), "lam": float(1 - ts[m + 1]),
                 "slack": float(slack[r, m]), "values": e[r].tolist()}
            ii = Verdict(Status.REFUTED, w, samples_used=len(a), margin=float(slack.min()))
        else:
            ii = Verdict(Status.INCONCLUSIVE if undecided else Status.CERTIFIED, samples_used=len(a),
                         margin=float(slack.min()))
        iii = check_strictly_nonexpansive(_Prox(lambda X: prox_blackbox(f, X, lam)), region, n_pairs, seed, tol)
        if iii.certified and len(qa):
            iii = _probe_nonexpansive(iii, f, qa, qb, lam, tol)
        params = {"lambda": lam, "seed": seed, "n_pairs": n_pairs, "n_segments": n_segments,
                  "region": region.to_dict()}
    named = [("almost_strictly_convex", i), ("envelope_strictly_convex", ii),
             ("prox_strictly_nonexpansive", iii)]
    return _report("t-envel", name, named, _expected_status(truth, "almost_strictly_convex"), params=params)
