"""Black-box convex functions on R^n, sampling regions and the midpoint check."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import EmptySampleRegion
from .tolerance import DEFAULT_TOL, Status, Tolerance, Verdict, judge_weak


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, stream)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


# -- regions ------------------------------------------------------------------


class Region:
    """A sampling region in R^n made of convex components."""

    dim: int

    def components(self) -> list:
        return [self]

    def sample(self, rng, n: int) -> np.ndarray:
        comps = self.components()
        idx = rng.integers(len(comps), size=n) if len(comps) > 1 else np.zeros(n, dtype=int)
        out = np.empty((n, self.dim))
        for k, c in enumerate(comps):
            mask = idx == k
            if mask.any():
                out[mask] = c._sample_convex(rng, int(mask.sum()))
        return out

    def sample_segments(self, rng, n: int):
        """Endpoint pairs whose connecting segment lies in one convex component."""
        comps = self.components()
        idx = rng.integers(len(comps), size=n) if len(comps) > 1 else np.zeros(n, dtype=int)
        a, b = np.empty((n, self.dim)), np.empty((n, self.dim))
        for k, c in enumerate(comps):
            mask = idx == k
            m = int(mask.sum())
            if m:
                a[mask] = c._sample_convex(rng, m)
                b[mask] = c._sample_convex(rng, m)
        return a, b

    def _sample_convex(self, rng, n):
        raise NotImplementedError

    def contains(self, x) -> bool:
        return any(c._contains_convex(np.asarray(x, dtype=float)) for c in self.components())

    def _contains_convex(self, x) -> bool:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(eq=False)
class Box(Region):
    """Closed box ``[lo, hi]``.

    ``boundary_weight`` (scalar or per-axis) is the probability that a sampled
    coordinate is snapped to one of its two faces; zero gives plain uniform
    sampling.  Degenerate axes (``lo == hi``) describe faces and rays.
    """

    lo: Sequence[float]
    hi: Sequence[float]
    boundary_weight: object = 0.0

    def __post_init__(self):
        self.lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if self.lo.shape != self.hi.shape:
            raise ValueError("lo and hi must have the same length")
        if np.any(self.lo > self.hi) or not (np.all(np.isfinite(self.lo)) and np.all(np.isfinite(self.hi))):
            raise EmptySampleRegion(f"box [{self.lo}, {self.hi}] has no points to sample")
        self.dim = self.lo.size
        self.boundary_weight = np.broadcast_to(np.asarray(self.boundary_weight, dtype=float), (self.dim,)).copy()

    def _sample_convex(self, rng, n):
        u = rng.random((n, self.dim))
        pts = self.lo + u * (self.hi - self.lo)
        if np.any(self.boundary_weight > 0):
            snap = rng.random((n, self.dim))
            side = rng.random((n, self.dim)) < 0.5
            w = self.boundary_weight
            pts = np.where(snap < w, np.where(side, self.lo, self.hi), pts)
        return pts

    def _contains_convex(self, x):
        return bool(np.all(x >= self.lo) and np.all(x <= self.hi))

    def to_dict(self):
        return {"type": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist(),
                "boundary_weight": self.boundary_weight.tolist()}


@dataclass(eq=False)
class Union(Region):
    parts: tuple

    def __post_init__(self):
        self.parts = tuple(self.parts)
        if not self.parts:
            raise EmptySampleRegion("empty union")
        dims = {p.dim for p in self.parts}
        if len(dims) != 1:
            raise ValueError("all components need the same dimension")
        self.dim = dims.pop()

    def components(self):
        return [c for p in self.parts for c in p.components()]

    def to_dict(self):
        return {"type": "union", "parts": [p.to_dict() for p in self.parts]}


@dataclass(eq=False)
class Mapped(Region):
    """Image of a convex region under ``x -> matrix @ x + offset``."""

    base: Region
    matrix: np.ndarray
    offset: Optional[np.ndarray] = None

    def __post_init__(self):
        self.matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        self.dim = self.matrix.shape[0]
        self.offset = np.zeros(self.dim) if self.offset is None else np.asarray(self.offset, dtype=float)
        self._inv = np.linalg.pinv(self.matrix)

    def components(self):
        return [Mapped(c, self.matrix, self.offset) for c in self.base.components()] \
            if len(self.base.components()) > 1 else [self]

    def _sample_convex(self, rng, n):
        return self.base._sample_convex(rng, n) @ self.matrix.T + self.offset

    def _contains_convex(self, x):
        return self.base.contains(self._inv @ (x - self.offset))

    def to_dict(self):
        return {"type": "mapped", "base": self.base.to_dict(), "matrix": self.matrix.tolist(),
                "offset": self.offset.tolist()}


@dataclass(eq=False)
class Predicate(Region):
    """Convex set described by a membership predicate, sampled by rejection from a box."""

    predicate: Callable
    bounding: Box
    max_tries: int = 100

    def __post_init__(self):
        self.dim = self.bounding.dim

    def _sample_convex(self, rng, n):
        got = []
        have = 0
        for _ in range(self.max_tries):
            cand = self.bounding._sample_convex(rng, max(4 * n, 16))
            ok = cand[[bool(self.predicate(c)) for c in cand]]
            got.append(ok)
            have += len(ok)
            if have >= n:
                return np.concatenate(got)[:n]
        raise EmptySampleRegion("predicate rejected every candidate point")

    def _contains_convex(self, x):
        return bool(self.predicate(x)) and self.bounding._contains_convex(x)

    def to_dict(self):
        return {"type": "predicate", "bounding": self.bounding.to_dict()}


def parse_region(text: str) -> Box:
    """Parse ``"a..b,c..d"`` into a box."""
    lo, hi = [], []
    for part in text.split(","):
        if ".." not in part:
            raise ValueError(f"region axis {part!r} is not of the form a..b")
        a, b = part.split("..")
        lo.append(float(a))
        hi.append(float(b))
    return Box(lo, hi)


# -- black-box functions ------------------------------------------------------


@dataclass(eq=False)
class BlackBoxConvex:
    """A convex function on R^n known through oracles.

    Parameters
    ----------
    dim : int
    func : callable
        ``x -> f(x)`` returning a float or ``inf`` outside ``dom f``.
    grad : callable, optional
        Gradient, valid on ``subdiff_domain``.
    subgrad : callable, optional
        ``x -> list of subgradients`` (empty outside ``dom ∂f``).
    domain : Region, optional
        Sampling hint for ``dom f``.
    subdiff_domain : Region, optional
        Sampling hint for ``dom ∂f``.
    vectorized : bool
        ``func`` accepts an ``(k, n)`` array and returns ``(k,)`` values.
    """

    dim: int
    func: Callable
    grad: Optional[Callable] = None
    subgrad: Optional[Callable] = None
    domain: Optional[Region] = None
    subdiff_domain: Optional[Region] = None
    vectorized: bool = False
    name: str = ""
    hess: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("dim must be a positive integer")
        self.dim = int(self.dim)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float).reshape(self.dim)
        v = self.func(x[None, :])[0] if self.vectorized else self.func(x)
        v = float(v)
        if math.isnan(v) or v == -math.inf:
            raise ValueError(f"{self.name or 'function'} returned {v} at {x}")
        return v

    def values(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        if self.vectorized:
            return np.asarray(self.func(X), dtype=float)
        return np.array([self(x) for x in X])

    @property
    def has_subgradients(self) -> bool:
        return self.grad is not None or self.subgrad is not None

    def subgradients(self, x) -> list:
        x = np.asarray(x, dtype=float).reshape(self.dim)
        if self.subgrad is not None:
            return [np.asarray(v, dtype=float).reshape(self.dim) for v in self.subgrad(x)]
        if self.grad is not None:
            return [np.asarray(self.grad(x), dtype=float).reshape(self.dim)]
        return []

    def sampling_region(self) -> Region:
        if self.domain is not None:
            return self.domain
        return Box(-10 * np.ones(self.dim), 10 * np.ones(self.dim))


def chord_slack(f: BlackBoxConvex, x, y, lam):
    """Return ``(slack, f(x), f(y), f(z))`` for ``z = lam x + (1 - lam) y``."""
    fx, fy = f.values(x), f.values(y)
    z = lam[:, None] * x + (1 - lam[:, None]) * y
    fz = f.values(z)
    with np.errstate(invalid="ignore"):
        slack = lam * fx + (1 - lam) * fy - fz
    return slack, fx, fy, fz


def chord_witness(x, y, lam, fx, fy, fz, slack, kind="STRICTNESS_FAIL") -> dict:
    return {"kind": kind, "x0": np.asarray(x).tolist(), "x1": np.asarray(y).tolist(),
            "lam": float(lam), "f_x0": float(fx), "f_x1": float(fy), "f_mid": float(fz),
            "slack": float(slack)}


def recheck_chord_witness(f: BlackBoxConvex, witness: dict) -> float:
    """Re-evaluate the chord slack recorded in a witness."""
    x, y, lam = np.asarray(witness["x0"]), np.asarray(witness["x1"]), witness["lam"]
    return lam * f(x) + (1 - lam) * f(y) - f(lam * x + (1 - lam) * y)


def midpoint_convexity_check(f: BlackBoxConvex, n_pairs: int = 1000, seed: int = 0,
                             tol: Tolerance = DEFAULT_TOL, region: Optional[Region] = None) -> Verdict:
    """Sampled test of the convexity inequality.

    Each sampled pair is tested at ``lam = 1/2`` and at one uniform
    ``lam in (0, 1)``.  Pairs with an infinite endpoint are vacuous.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    region = region or f.sampling_region()
    rng = make_rng(seed)
    x, y = region.sample_segments(rng, n_pairs)
    lam = np.concatenate([np.full(n_pairs, 0.5), rng.random(n_pairs)])
    x, y = np.concatenate([x, x]), np.concatenate([y, y])
    slack, fx, fy, fz = chord_slack(f, x, y, lam)
    finite_ends = np.isfinite(fx) & np.isfinite(fy)
    used = int(finite_ends.sum())
    if used == 0:
        raise EmptySampleRegion("no sampled pair has both endpoints in dom f")
    margin = float(np.min(slack[finite_ends]))
    for i in np.flatnonzero(finite_ends):
        scale = max(abs(fx[i]), abs(fy[i]), abs(fz[i]) if np.isfinite(fz[i]) else 0.0)
        if judge_weak(slack[i], tol, scale) is Status.REFUTED:
            return Verdict(Status.REFUTED, chord_witness(x[i], y[i], lam[i], fx[i], fy[i], fz[i], slack[i],
                                                         kind="CONVEXITY_FAIL"),
                           samples_used=used, margin=margin)
    return Verdict(Status.CERTIFIED, samples_used=used, margin=margin)
