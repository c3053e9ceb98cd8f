"""Proximal average of two piecewise-linear convex functions, re-chorded to PL."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core.pl import MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE, PLConvex1D, pl_eval_array
from ..errors import ChordingToleranceExceeded
from .envelope import EnvelopeParams, prox_pl_array, resolvent_knots


@dataclass(frozen=True)
class ProxAverageParams:
    lam: float
    alpha: float

    def __post_init__(self):
        EnvelopeParams(self.lam)
        if not (0 < self.alpha < 1):
            raise ValueError(f"alpha must lie strictly between 0 and 1, got {self.alpha!r}")


def _knots_over_lam(f, lam):
    a, b = resolvent_knots(f, lam)
    return [t / lam for t in a + b if math.isfinite(t)] + [x / lam for x in f.breakpoints]


def _sample(f1, f2, lam, alpha, u):
    """Points ``(X, F, S)`` on the graph of the average at dual parameters ``u``.

    With ``g_i = f_i + |.|^2/(2 lam)`` and ``h = alpha g_1* + (1-alpha) g_2*``,
    ``X = h'(u)`` is the alpha-mix of ``prox_{lam f_i}(lam u)``, the average
    is ``F = u X - h(u) - X^2/(2 lam)`` at ``X``, and ``S = u - X/lam`` is a
    subgradient there.
    """
    x1 = prox_pl_array(f1, lam, lam * u)
    x2 = prox_pl_array(f2, lam, lam * u)
    g1 = u * x1 - pl_eval_array(f1, x1) - x1 * x1 / (2 * lam)
    g2 = u * x2 - pl_eval_array(f2, x2) - x2 * x2 / (2 * lam)
    h = alpha * g1 + (1 - alpha) * g2
    X = alpha * x1 + (1 - alpha) * x2
    F = u * X - h - X * X / (2 * lam)
    return X, F, u - X / lam


_KINK_RTOL = 1e-9


def _lower_hull(X, F, S):
    """Drop near-duplicate abscissae and nodes that are not clear kinks.

    Nodes whose two secants differ by less than ``_KINK_RTOL`` (relative) are
    removed; keeping them would give the conjugate nearly coincident
    breakpoints and ill-conditioned secants.
    """
    keep = [0]
    for k in range(1, len(X)):
        if X[k] - X[keep[-1]] <= 1e-12 * (1 + abs(X[k])):
            continue
        while len(keep) >= 2:
            i, j = keep[-2], keep[-1]
            s_ij = (F[j] - F[i]) / (X[j] - X[i])
            s_jk = (F[k] - F[j]) / (X[k] - X[j])
            if s_jk - s_ij <= _KINK_RTOL * (1 + abs(s_ij) + abs(s_jk)):
                keep.pop()
            else:
                break
        keep.append(k)
    keep = np.asarray(keep)
    return X[keep], F[keep], S[keep]


def _chord_bounds(X, S):
    # a convex function with derivative range [S_k, S_{k+1}] on [X_k, X_{k+1}]
    # deviates from its chord by at most dX dS / 4
    return np.diff(X) * np.maximum(np.diff(S), 0.0) / 4


def proximal_average(f1: PLConvex1D, f2: PLConvex1D, p: ProxAverageParams, slope_grid=None,
                     chord_tol: float | None = None, max_refine: int = 12, return_bound: bool = False):
    """PL chord approximation of the proximal average of ``f1`` and ``f2``.

    The average ``f`` is defined by
    ``f + |.|^2/(2 lam) = (alpha g_1* + (1-alpha) g_2*)*`` with
    ``g_i = f_i + |.|^2/(2 lam)``.  Each ``g_i*`` is evaluated exactly
    through ``prox_{lam f_i}``; the resulting points of ``f`` are joined by
    chords.  Its envelope satisfies
    ``e_lam f = alpha e_lam f_1 + (1 - alpha) e_lam f_2``.

    Parameters
    ----------
    f1, f2 : PLConvex1D
    p : ProxAverageParams
    slope_grid : array_like, optional
        Dual parameters ``u`` at which the average is sampled; the resolvent
        knots of both inputs are always added.  ``u`` corresponds to the
        envelope evaluation point ``x = lam u``.
    chord_tol : float, optional
        Target for the chord error bound; intervals are bisected in ``u``
        until it is met.
    return_bound : bool
        Also return the chord error bound, valid between the first and last
        chord nodes.

    Raises
    ------
    ChordingToleranceExceeded
        When ``chord_tol`` is not met after ``max_refine`` bisection rounds.
    """
    lam, alpha = float(p.lam), float(p.alpha)
    f1, f2 = f1.to_float(), f2.to_float()
    knots = np.asarray(_knots_over_lam(f1, lam) + _knots_over_lam(f2, lam))
    if slope_grid is None:
        lo, hi = knots.min(), knots.max()
        pad = 1.0 + (hi - lo)
        slope_grid = np.linspace(lo - pad, hi + pad, 201)
    u = np.asarray(slope_grid, dtype=float).ravel()
    u = np.unique(np.concatenate([u, knots, [knots.min() - 1.0, knots.max() + 1.0]]))

    for _ in range(max_refine + 1):
        Xa, Fa, Sa = _sample(f1, f2, lam, alpha, u)
        X, F, S = _lower_hull(Xa, Fa, Sa)
        bounds = _chord_bounds(X, S)
        bound = float(bounds.max()) if bounds.size else 0.0
        if chord_tol is None or bound <= chord_tol:
            break
        bad = _chord_bounds(Xa, Sa) > chord_tol / 2
        if not bad.any():
            bad[:] = True
        u = np.unique(np.concatenate([u, ((u[:-1] + u[1:]) / 2)[bad]]))
    else:
        raise ChordingToleranceExceeded(f"chord bound {bound:g} exceeds {chord_tol:g} after {max_refine} refinements")

    left = float(S[0])
    if f1.left_tail is MINUS_INFINITY_SLOPE and f2.left_tail is MINUS_INFINITY_SLOPE:
        edge = alpha * float(f1.breakpoints[0]) + (1 - alpha) * float(f2.breakpoints[0])
        if abs(X[0] - edge) <= 1e-12 * (1 + abs(edge)):
            left = MINUS_INFINITY_SLOPE
    right = float(S[-1])
    if f1.right_tail is PLUS_INFINITY_SLOPE and f2.right_tail is PLUS_INFINITY_SLOPE:
        edge = alpha * float(f1.breakpoints[-1]) + (1 - alpha) * float(f2.breakpoints[-1])
        if abs(X[-1] - edge) <= 1e-12 * (1 + abs(edge)):
            right = PLUS_INFINITY_SLOPE
    if len(X) == 1:
        # f is finite at a single point or the data collapsed to one node
        if left is not MINUS_INFINITY_SLOPE and right is not PLUS_INFINITY_SLOPE and right < left:
            right = left
    else:
        # tangent tails must not cut above the end chords
        sec = np.diff(F) / np.diff(X)
        if left is not MINUS_INFINITY_SLOPE and left > sec[0] - _KINK_RTOL * (1 + abs(sec[0])):
            left = float(sec[0])
        if right is not PLUS_INFINITY_SLOPE and right < sec[-1] + _KINK_RTOL * (1 + abs(sec[-1])):
            right = float(sec[-1])
    out = PLConvex1D(tuple(X.tolist()), tuple(F.tolist()), left, right)
    return (out, bound) if return_bound else out
