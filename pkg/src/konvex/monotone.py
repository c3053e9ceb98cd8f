"""Set-valued operators: monotonicity taxonomy, resolvents and the equivalence suite.

Operators are known through a finite graph sample (:class:`FiniteOperatorGraph`)
and, optionally, an oracle returning the finite set ``A x`` at a point
(:class:`OperatorOracle`).  Pairwise checks walk index pairs ``i < j`` in
row-major order, so the first witness is deterministic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core.blackbox import Region, make_rng
from .core.polyline import MonotonePolyline
from .core.serialize import to_jsonable
from .core.tolerance import (DEFAULT_TOL, PLUS_INFINITY, Status, Tolerance, Verdict, judge_strict,
                             cosine, judge_strict_array, judge_weak)
from .errors import NotMonotone, SingularMatrix


# -- operator representations -------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteOperatorGraph:
    """Finite sample ``{(x_k, v_k)}`` of ``gra A`` in ``R^n x R^n``.

    Several pairs may share the same ``x`` (multivalued points); exact
    duplicate pairs are rejected.
    """

    dim: int
    X: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float).reshape(-1, self.dim)
        V = np.asarray(self.V, dtype=float).reshape(-1, self.dim)
        if X.shape != V.shape:
            raise ValueError("X and V must have the same number of rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(V))):
            raise ValueError("graph pairs must be finite")
        rows = np.hstack([X, V])
        if len(np.unique(rows, axis=0)) != len(rows):
            raise ValueError("duplicate (x, v) pair in operator graph")
        X.flags.writeable = False
        V.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "V", V)

    @classmethod
    def from_pairs(cls, pairs, dim: Optional[int] = None) -> "FiniteOperatorGraph":
        pairs = list(pairs)
        if dim is None:
            dim = np.atleast_1d(pairs[0][0]).size if pairs else 1
        X = np.array([np.atleast_1d(np.asarray(x, dtype=float)) for x, _ in pairs]).reshape(-1, dim)
        V = np.array([np.atleast_1d(np.asarray(v, dtype=float)) for _, v in pairs]).reshape(-1, dim)
        return cls(dim, X, V)

    def __len__(self):
        return len(self.X)

    def pairs(self):
        return list(zip(self.X, self.V))

    def contains(self, x, v, tol: Tolerance = DEFAULT_TOL) -> bool:
        x, v = np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(v, dtype=float))
        dx = np.linalg.norm(self.X - x, axis=1)
        dv = np.linalg.norm(self.V - v, axis=1)
        return bool(np.any((dx <= tol.eq_tol(np.linalg.norm(x))) & (dv <= tol.eq_tol(np.linalg.norm(v)))))

    def to_dict(self, metadata: Optional[dict] = None) -> dict:
        return {"dim": self.dim, "pairs": [[x.tolist(), v.tolist()] for x, v in self.pairs()],
                "metadata": dict(metadata or {})}

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteOperatorGraph":
        if "dim" not in d or "pairs" not in d:
            raise ValueError("operator graph JSON needs 'dim' and 'pairs'")
        return cls.from_pairs([(x, v) for x, v in d["pairs"]], dim=int(d["dim"]))

    def dumps(self, metadata: Optional[dict] = None) -> str:
        return json.dumps(self.to_dict(metadata), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "FiniteOperatorGraph":
        return cls.from_dict(json.loads(text))


@dataclass(eq=False)
class OperatorOracle:
    """``A : R^n -> 2^(R^n)`` through ``apply(x) -> list of values`` (empty off ``dom A``).

    ``metadata`` holds declared properties such as ``maximal`` and
    ``paramonotone``; they label fixtures and never enter a check.
    """

    dim: int
    apply: Callable
    metadata: dict = field(default_factory=dict)
    name: str = ""

    def __call__(self, x) -> list:
        x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(self.dim)
        return [np.atleast_1d(np.asarray(v, dtype=float)).reshape(self.dim) for v in self.apply(x)]

    def graph(self, points) -> FiniteOperatorGraph:
        """Graph sample at ``points`` (every value of ``A x`` is kept)."""
        pairs, seen = [], set()
        for x in np.asarray(points, dtype=float).reshape(-1, self.dim):
            for v in self(x):
                key = tuple(x.tolist()) + tuple(v.tolist())
                if key not in seen:
                    seen.add(key)
                    pairs.append((x.copy(), v))
        return FiniteOperatorGraph.from_pairs(pairs, dim=self.dim)


# -- pairwise checks ----------------------------------------------------------


def _pair_products(g: FiniteOperatorGraph):
    i, j = np.triu_indices(len(g), k=1)
    dX = g.X[j] - g.X[i]
    dV = g.V[j] - g.V[i]
    ip = np.einsum("ij,ij->i", dX, dV)
    scale = np.linalg.norm(dX, axis=1) * np.linalg.norm(dV, axis=1)
    return i, j, dX, ip, scale


def _pair_witness(g, i, j, ip, kind):
    return {"kind": kind, "x0": g.X[i].tolist(), "v0": g.V[i].tolist(),
            "x1": g.X[j].tolist(), "v1": g.V[j].tolist(), "inner_product": float(ip)}


def check_monotone(g: FiniteOperatorGraph, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Exhaustive pairwise test of ``<x0 - x1, v0 - v1> >= 0``."""
    n_pairs = len(g) * (len(g) - 1) // 2
    if n_pairs == 0:
        return Verdict(Status.CERTIFIED, sampled=False)
    i, j, _, ip, scale = _pair_products(g)
    bad = np.flatnonzero(ip < -(tol.eq_abs + tol.eq_rel * scale))
    margin = float(ip.min())
    if bad.size:
        k = bad[0]
        return Verdict(Status.REFUTED, _pair_witness(g, i[k], j[k], ip[k], "MONOTONE_FAIL"),
                       samples_used=n_pairs, margin=margin, sampled=False)
    return Verdict(Status.CERTIFIED, samples_used=n_pairs, margin=margin, sampled=False)


def check_strictly_monotone(g: FiniteOperatorGraph, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Pairwise test of ``<x0 - x1, v0 - v1> > 0`` over pairs with ``x0 != x1``.

    The claim is judged on the cosine ``<dx, dv> / (|dx| |dv|)``: cosines
    within ``eq_rel`` of zero (or a vanishing ``dv``) refute, positive ones
    below ``strict_margin`` are inconclusive.  ``margin`` is the smallest
    cosine.
    """
    if len(g) < 2:
        return Verdict(Status.CERTIFIED, sampled=False)
    i, j, dX, ip, scale = _pair_products(g)
    distinct = np.any(dX != 0, axis=1)
    i, j, ip, scale = i[distinct], j[distinct], ip[distinct], scale[distinct]
    if ip.size == 0:
        return Verdict(Status.CERTIFIED, sampled=False, reason="no pair with distinct points")
    cos = cosine(ip, scale)
    k, undecided = judge_strict_array(cos, tol, 1.0)
    if k is not None:
        w = _pair_witness(g, i[k], j[k], ip[k], "STRICT_MONOTONE_FAIL")
        w["cosine"] = float(cos[k])
        return Verdict(Status.REFUTED, w, samples_used=int(ip.size), margin=float(cos.min()), sampled=False)
    status = Status.INCONCLUSIVE if undecided else Status.CERTIFIED
    return Verdict(status, samples_used=int(ip.size), margin=float(cos.min()), sampled=False)


def _in_graph_or_oracle(g, oracle, x, v, tol):
    if g.contains(x, v, tol):
        return True
    if oracle is None:
        return False
    return any(np.linalg.norm(w - v) <= tol.eq_tol(np.linalg.norm(v)) for w in oracle(x))


def check_paramonotone(g: FiniteOperatorGraph, closure_oracle: Optional[OperatorOracle] = None,
                       tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Every equality pair must have its crossed pairs ``(x0, v1), (x1, v0)`` in the graph.

    Membership is tested in ``g`` first and then through ``closure_oracle``.

    Raises
    ------
    NotMonotone
        If ``g`` is not monotone.
    """
    mono = check_monotone(g, tol)
    if mono.refuted:
        raise NotMonotone(f"graph is not monotone: {mono.witness}")
    if len(g) < 2:
        return Verdict(Status.CERTIFIED, sampled=False)
    i, j, dX, ip, scale = _pair_products(g)
    eq = (np.abs(ip) <= tol.eq_abs * (1 + scale)) & np.any(dX != 0, axis=1)
    checked = 0
    for k in np.flatnonzero(eq):
        checked += 1
        x0, v0, x1, v1 = g.X[i[k]], g.V[i[k]], g.X[j[k]], g.V[j[k]]
        ok0 = _in_graph_or_oracle(g, closure_oracle, x0, v1, tol)
        ok1 = _in_graph_or_oracle(g, closure_oracle, x1, v0, tol)
        if not (ok0 and ok1):
            w = _pair_witness(g, i[k], j[k], ip[k], "PARAMONOTONE_FAIL")
            w["missing"] = [[x0.tolist(), v1.tolist()]] * (not ok0) + [[x1.tolist(), v0.tolist()]] * (not ok1)
            return Verdict(Status.REFUTED, w, samples_used=checked, margin=0.0, sampled=False)
    return Verdict(Status.CERTIFIED, samples_used=checked, sampled=False,
                   details={"equality_pairs": checked})


def check_disjoint_images(g: FiniteOperatorGraph, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """``A x ∩ A y = ∅`` for distinct sampled ``x, y`` (no shared value across points)."""
    if len(g) < 2:
        return Verdict(Status.CERTIFIED, sampled=False)
    i, j = np.triu_indices(len(g), k=1)
    dx = np.linalg.norm(g.X[j] - g.X[i], axis=1)
    dv = np.linalg.norm(g.V[j] - g.V[i], axis=1)
    vscale = np.maximum(np.linalg.norm(g.V[i], axis=1), np.linalg.norm(g.V[j], axis=1))
    hit = np.flatnonzero((dx > 0) & (dv <= tol.eq_abs + tol.eq_rel * vscale))
    if hit.size:
        k = hit[0]
        return Verdict(Status.REFUTED, _pair_witness(g, i[k], j[k], 0.0, "SHARED_VALUE"),
                       samples_used=int(i.size), margin=float(dv[k]), sampled=False)
    return Verdict(Status.CERTIFIED, samples_used=int(i.size), margin=float(dv[dx > 0].min()) if np.any(dx > 0)
                   else PLUS_INFINITY, sampled=False)


def check_almost_strictly_monotone(g: FiniteOperatorGraph, segment_oracle: OperatorOracle,
                                   n_segment_samples: int = 17, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Strict monotonicity along every sampled segment lying in ``dom A``.

    For each pair of distinct domain points of ``g``, the oracle is queried
    at ``n_segment_samples`` equally spaced interior points; if all of them
    lie in ``dom A`` the values along the segment must satisfy the strict
    inequality (checked on consecutive points, which suffices along a line).
    Segments leaving ``dom A`` are skipped.
    """
    if n_segment_samples < 1:
        raise ValueError("n_segment_samples must be >= 1")
    pts = np.unique(g.X, axis=0)
    ts = np.arange(1, n_segment_samples + 1) / (n_segment_samples + 1)
    segments = 0
    margin = PLUS_INFINITY
    status = Status.CERTIFIED
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            x0, x1 = pts[a], pts[b]
            d = x1 - x0
            layers = [(0.0, [v for v in g.V[np.all(g.X == x0, axis=1)]])]
            inside = True
            for t in ts:
                vals = segment_oracle(x0 + t * d)
                if not vals:
                    inside = False
                    break
                layers.append((t, vals))
            if not inside:
                continue
            layers.append((1.0, [v for v in g.V[np.all(g.X == x1, axis=1)]]))
            segments += 1
            for (ta, va), (tb, vb) in zip(layers[:-1], layers[1:]):
                dx = (tb - ta) * d
                for p in va:
                    for q in vb:
                        ip = float(dx @ (q - p))
                        c = float(cosine(ip, np.linalg.norm(dx) * np.linalg.norm(q - p)))
                        margin = min(margin, c)
                        s = judge_strict(c, tol, 1.0)
                        if s is Status.REFUTED:
                            w = {"kind": "SEGMENT_STRICT_FAIL", "x0": x0.tolist(), "x1": x1.tolist(),
                                 "t0": ta, "t1": tb, "point_a": (x0 + ta * d).tolist(),
                                 "point_b": (x0 + tb * d).tolist(), "v_a": p.tolist(), "v_b": q.tolist(),
                                 "inner_product": ip}
                            return Verdict(Status.REFUTED, w, samples_used=segments, margin=margin)
                        if s is Status.INCONCLUSIVE:
                            status = Status.INCONCLUSIVE
    return Verdict(status, samples_used=segments, margin=margin, details={"segments_in_domain": segments})


# -- resolvents ---------------------------------------------------------------


def resolvent_polyline(g: MonotonePolyline, lam) -> MonotonePolyline:
    """Graph of ``J_{lam A} = (Id + lam A)^{-1}`` via ``(x, y) -> (x + lam y, x)``.

    The result is the graph of a nondecreasing 1-Lipschitz function on R.
    """
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be finite and > 0, got {lam!r}")

    def ray(d):
        dx, dy = d
        return (dx + lam * dy, dx)

    verts = tuple((x + lam * y, x) for x, y in g.vertices)
    return MonotonePolyline(verts, ray(g.head_ray), ray(g.tail_ray))


def resolvent_linear2d(matrix) -> np.ndarray:
    """Closed-form ``(Id + M)^{-1}`` for a 2x2 matrix ``M``.

    Raises
    ------
    SingularMatrix
        If ``Id + M`` is singular.
    """
    M = np.asarray(matrix, dtype=float)
    if M.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    a, b = 1 + M[0, 0], M[0, 1]
    c, d = M[1, 0], 1 + M[1, 1]
    det = a * d - b * c
    if abs(det) <= 1e-14 * max(1.0, abs(a * d), abs(b * c)):
        raise SingularMatrix(f"Id + M is singular (det = {det!r})")
    return np.array([[d, -b], [-c, a]]) / det


def _sample_pairs(region: Region, n_pairs: int, seed: int):
    # independent endpoints: pairs may straddle different components
    rng = make_rng(seed)
    return region.sample(rng, n_pairs), region.sample(rng, n_pairs)


def _apply_map(T, X):
    if getattr(T, "batched", False):
        return np.asarray(T(X), dtype=float).reshape(X.shape)
    return np.array([np.atleast_1d(np.asarray(T(x), dtype=float)) for x in X]).reshape(X.shape)


def check_strictly_nonexpansive(map_oracle: Callable, region: Region, n_pairs: int = 1000, seed: int = 0,
                                tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Sampled test of ``|T x - T y| < |x - y|`` for ``x != y``.

    A map carrying the attribute ``batched = True`` is applied to the whole
    ``(k, n)`` sample array at once.

    ``details["firmly_nonexpansive"]`` records whether
    ``<T x - T y, x - y> >= |T x - T y|^2`` held on every sampled pair.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    X, Y = _sample_pairs(region, n_pairs, seed)
    TX, TY = _apply_map(map_oracle, X), _apply_map(map_oracle, Y)
    dx = np.linalg.norm(X - Y, axis=1)
    dT = np.linalg.norm(TX - TY, axis=1)
    firm = np.einsum("ij,ij->i", TX - TY, X - Y) - dT ** 2
    firm_ok = bool(all(judge_weak(s, tol, dx[k] ** 2) is Status.CERTIFIED for k, s in enumerate(firm)))
    status, witness, used = Status.CERTIFIED, None, 0
    # relative contraction 1 - |Tx - Ty| / |x - y|
    slack = cosine(dx - dT, dx)
    for k in range(n_pairs):
        if dx[k] == 0:
            continue
        used += 1
        s = judge_strict(slack[k], tol, 1.0)
        if s is Status.REFUTED:
            witness = {"kind": "NONEXPANSIVE_EQUALITY", "x": X[k].tolist(), "y": Y[k].tolist(),
                       "Tx": TX[k].tolist(), "Ty": TY[k].tolist(), "slack": float(slack[k])}
            status = Status.REFUTED
            break
        if s is Status.INCONCLUSIVE:
            status = Status.INCONCLUSIVE
    margin = float(slack[dx > 0].min()) if np.any(dx > 0) else PLUS_INFINITY
    return Verdict(status, witness, samples_used=used, margin=margin,
                   details={"firmly_nonexpansive": firm_ok, "min_firm_slack": float(firm.min())})


def check_injective_map(map_oracle: Callable, region: Region, n_pairs: int = 1000, seed: int = 0,
                        tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Sampled injectivity: ``T x != T y`` whenever ``x != y``.

    Judged on the ratio ``|T x - T y| / |x - y|``.
    """
    X, Y = _sample_pairs(region, n_pairs, seed)
    TX, TY = _apply_map(map_oracle, X), _apply_map(map_oracle, Y)
    dx = np.linalg.norm(X - Y, axis=1)
    dT = np.linalg.norm(TX - TY, axis=1)
    ratio = cosine(dT, dx)
    status, used = Status.CERTIFIED, 0
    for k in range(n_pairs):
        if dx[k] == 0:
            continue
        used += 1
        s = judge_strict(ratio[k], tol, 1.0)
        if s is Status.REFUTED:
            w = {"kind": "NOT_INJECTIVE", "x": X[k].tolist(), "y": Y[k].tolist(),
                 "Tx": TX[k].tolist(), "Ty": TY[k].tolist(), "distance": float(dT[k])}
            return Verdict(Status.REFUTED, w, samples_used=used, margin=float(ratio[k]))
        if s is Status.INCONCLUSIVE:
            status = Status.INCONCLUSIVE
    return Verdict(status, samples_used=used, margin=float(ratio[dx > 0].min()) if used else PLUS_INFINITY)


def check_strictly_monotone_map(map_oracle: Callable, region: Region, n_pairs: int = 1000, seed: int = 0,
                                tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Sampled ``<T x - T y, x - y> > 0`` for a single-valued map ``T``."""
    X, Y = _sample_pairs(region, n_pairs, seed)
    TX, TY = _apply_map(map_oracle, X), _apply_map(map_oracle, Y)
    dX, dT = X - Y, TX - TY
    ip = np.einsum("ij,ij->i", dX, dT)
    cos = cosine(ip, np.linalg.norm(dX, axis=1) * np.linalg.norm(dT, axis=1))
    status, used = Status.CERTIFIED, 0
    for k in range(n_pairs):
        if not np.any(dX[k] != 0):
            continue
        used += 1
        s = judge_strict(cos[k], tol, 1.0)
        if s is Status.REFUTED:
            w = {"kind": "STRICT_MONOTONE_FAIL", "x0": X[k].tolist(), "v0": TX[k].tolist(),
                 "x1": Y[k].tolist(), "v1": TY[k].tolist(), "inner_product": float(ip[k]),
                 "cosine": float(cos[k])}
            return Verdict(Status.REFUTED, w, samples_used=used, margin=float(cos[k]))
        if s is Status.INCONCLUSIVE:
            status = Status.INCONCLUSIVE
    return Verdict(status, samples_used=used, margin=float(cos.min()))


def check_inverse_single_valued(inverse_oracle: Callable, ran_samples, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """``A^{-1}`` is at most single-valued at each sampled ``v`` (values within ``eq_abs``)."""
    used = 0
    for v in np.atleast_2d(np.asarray(ran_samples, dtype=float)):
        xs = [np.atleast_1d(np.asarray(x, dtype=float)) for x in inverse_oracle(v)]
        used += 1
        for x in xs[1:]:
            if np.linalg.norm(x - xs[0]) > tol.eq_tol(np.linalg.norm(xs[0])):
                w = {"kind": "MULTIVALUED_INVERSE", "v": v.tolist(), "x0": xs[0].tolist(), "x1": x.tolist()}
                return Verdict(Status.REFUTED, w, samples_used=used, margin=0.0)
    return Verdict(Status.CERTIFIED, samples_used=used)


# -- the equivalence suite ----------------------------------------------------


@dataclass(eq=False)
class OperatorFixture:
    """Everything the equivalence suite needs about one operator ``A``.

    Attributes
    ----------
    oracle : OperatorOracle
        ``x -> A x``.
    graph : FiniteOperatorGraph
        Sampled graph used by the pairwise checks.
    resolvent : callable
        ``x -> J_A x`` on ``resolvent_region``.
    inverse : callable
        ``v -> finite subset of A^{-1} v``.
    ran_samples : array
        Points of ``ran A`` at which the inverse is probed.
    truth : dict
        Declared properties; ``paramonotone`` and ``maximal`` set the
        expected outcome of the suite.
    """

    name: str
    oracle: OperatorOracle
    graph: FiniteOperatorGraph
    resolvent: Callable
    inverse: Callable
    resolvent_region: Region
    ran_samples: np.ndarray
    truth: dict = field(default_factory=dict)
    provenance: str = ""

    @property
    def dim(self):
        return self.oracle.dim


PARA_CONDITIONS = ("strictly_monotone", "almost_strictly_monotone", "inverse_single_valued",
                   "resolvent_strictly_nonexpansive", "complement_injective", "complement_strictly_monotone")


def _condition(name, verdict):
    return {"name": name, "verdict": verdict.label(), "status": verdict.status.value,
            "margin": verdict.margin, "samples_used": verdict.samples_used, "witness": verdict.witness}


def _segment_property(fx: OperatorFixture, tol):
    """On equality pairs, interior oracle values contain both endpoint values."""
    g = fx.graph
    i, j, dX, ip, scale = _pair_products(g)
    eq = np.flatnonzero((np.abs(ip) <= tol.eq_abs * (1 + scale)) & np.any(dX != 0, axis=1))
    for k in eq:
        x0, x1, v0, v1 = g.X[i[k]], g.X[j[k]], g.V[i[k]], g.V[j[k]]
        for t in (0.25, 0.5, 0.75):
            vals = fx.oracle(x0 + t * (x1 - x0))
            for v in (v0, v1):
                if not any(np.linalg.norm(w - v) <= tol.eq_tol(np.linalg.norm(v)) for w in vals):
                    w = _pair_witness(g, i[k], j[k], ip[k], "SEGMENT_PROPERTY_FAIL")
                    w["t"] = t
                    return Verdict(Status.REFUTED, w, samples_used=int(eq.size))
    return Verdict(Status.CERTIFIED, samples_used=int(eq.size))


def para_equivalence_suite(fx: OperatorFixture, tol: Tolerance = DEFAULT_TOL, n_pairs: int = 1000,
                           seed: int = 0, n_segment_samples: int = 17) -> dict:
    """Evaluate the six conditions that coincide for paramonotone maximal operators.

    Conditions: strict monotonicity of ``A``; almost strict monotonicity of
    ``A``; ``A^{-1}`` at most single-valued; ``J_A`` strictly nonexpansive;
    ``Id - J_A`` injective; ``Id - J_A`` strictly monotone.  Agreement is
    expected exactly when the fixture is declared paramonotone and maximal;
    otherwise a disagreement is expected and recorded.  ``coherent`` is true
    when the observed agreement matches the expectation.
    """
    J = fx.resolvent

    def comp(x):
        return np.asarray(x, dtype=float) - np.asarray(J(x), dtype=float)

    verdicts = {
        "strictly_monotone": check_strictly_monotone(fx.graph, tol),
        "almost_strictly_monotone": check_almost_strictly_monotone(fx.graph, fx.oracle, n_segment_samples, tol),
        "inverse_single_valued": check_inverse_single_valued(fx.inverse, fx.ran_samples, tol),
        "resolvent_strictly_nonexpansive": check_strictly_nonexpansive(J, fx.resolvent_region, n_pairs, seed, tol),
        "complement_injective": check_injective_map(comp, fx.resolvent_region, n_pairs, seed, tol),
        "complement_strictly_monotone": check_strictly_monotone_map(comp, fx.resolvent_region, n_pairs, seed, tol),
    }
    statuses = [verdicts[k].status for k in PARA_CONDITIONS]
    agreement = Status.INCONCLUSIVE not in statuses and len(set(statuses)) == 1
    expected = bool(fx.truth.get("paramonotone")) and bool(fx.truth.get("maximal"))

    # auxiliary checks tied to paramonotonicity
    try:
        para = check_paramonotone(fx.graph, fx.oracle, tol)
    except NotMonotone as exc:
        para = Verdict(Status.REFUTED, {"kind": "NOT_MONOTONE", "message": str(exc)})
    aux = {"paramonotone": para}
    if para.certified:
        aux["disjoint_images"] = check_disjoint_images(fx.graph, tol)
    if para.certified and fx.truth.get("maximal"):
        aux["segment_property"] = _segment_property(fx, tol)
    aux_ok = True
    if "disjoint_images" in aux:
        aux_ok &= aux["disjoint_images"].status is verdicts["strictly_monotone"].status
    if "segment_property" in aux:
        aux_ok &= aux["segment_property"].certified

    disagreement = {a: {b: verdicts[a].status is verdicts[b].status for b in PARA_CONDITIONS}
                    for a in PARA_CONDITIONS}
    return to_jsonable({
        "suite": "t-para",
        "fixture": fx.name,
        "conditions": [_condition(k, verdicts[k]) for k in PARA_CONDITIONS],
        "auxiliary": [_condition(k, v) for k, v in aux.items()],
        "agreement": agreement,
        "expected_agreement": expected,
        "coherent": (agreement == expected) and aux_ok,
        "agreement_matrix": disagreement,
        "params": {"n_pairs": n_pairs, "seed": seed, "n_segment_samples": n_segment_samples},
    })
