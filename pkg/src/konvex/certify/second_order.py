"""Second-order tests: positivity of ``f''`` (or ``<∇²f Δ, Δ>``) on a set of positive measure.

The measure condition is discretized on dyadic subintervals: the interval
is halved repeatedly down to the grid resolution and every piece must
contain a grid point where the second derivative clears ``strict_margin``.
A piece on which it never leaves the equality band is a flat patch and
refutes; the coarsest such patch is reported.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..core.tolerance import DEFAULT_TOL, Status, Tolerance, Verdict
from ..errors import HessianUnavailable
from .witness import SecondOrderProfile


def _evaluate(fpp, xs):
    try:
        out = np.asarray(fpp(xs), dtype=float)
        if out.shape == xs.shape:
            return out
    except Exception:  # scalar-only oracle; fall back to a loop
        pass
    return np.array([float(fpp(x)) for x in xs])


def _dyadic_scan(ts, q, tol: Tolerance):
    """Return ``(status, witness)`` for samples ``q`` at parameters ``ts`` in [0, 1]."""
    n = len(ts)
    neg = np.flatnonzero(q < -tol.eq_abs)
    if neg.size:
        k = neg[0]
        return Status.REFUTED, {"kind": "NEGATIVE_CURVATURE", "t": float(ts[k]), "value": float(q[k])}
    pos = q > tol.strict_margin
    flat = q <= tol.eq_abs
    status = Status.CERTIFIED
    level = 0
    while 2 ** level <= n - 1:
        pieces = 2 ** level
        for j in range(pieces):
            lo, hi = j / pieces, (j + 1) / pieces
            inside = (ts >= lo) & (ts <= hi)
            if not inside.any():
                continue
            if np.all(flat[inside]):
                return Status.REFUTED, {"kind": "FLAT_PATCH", "level": level, "t_interval": [lo, hi],
                                        "points": int(inside.sum()), "max_value": float(q[inside].max())}
            if not np.any(pos[inside]):
                status = Status.INCONCLUSIVE
        level += 1
    return status, None


def second_order_test_1d(fpp: Callable, a: float, b: float, n_grid: int = 1025,
                         tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Discretized test that ``f'' >= 0`` and ``f'' > 0`` on a set meeting every subinterval.

    Parameters
    ----------
    fpp : callable
        Second derivative, defined almost everywhere (vectorized or scalar).
    a, b : float
        Interval with ``a < b``.
    n_grid : int
        Number of equally spaced grid points (at least 3); ``2**k + 1``
        aligns the grid with the dyadic pieces.
    """
    if n_grid < 3:
        raise ValueError("n_grid must be >= 3")
    if not a < b:
        raise ValueError("need a < b")
    ts = np.linspace(0.0, 1.0, n_grid)
    xs = a + ts * (b - a)
    q = _evaluate(fpp, xs)
    profile = SecondOrderProfile(ts, q, tol.strict_margin)
    status, witness = _dyadic_scan(ts, q, tol)
    if witness is not None:
        if "t_interval" in witness:
            witness["x_interval"] = [a + t * (b - a) for t in witness["t_interval"]]
        else:
            witness["x"] = a + witness["t"] * (b - a)
        return Verdict(Status.REFUTED, witness, samples_used=n_grid, margin=float(q.min()),
                       details={"fraction_positive": profile.fraction_positive})
    return Verdict(status, samples_used=n_grid, margin=float(q.min()),
                   details={"fraction_positive": profile.fraction_positive, "resolution": (b - a) / (n_grid - 1)})


def second_order_test_nd(hess: Callable, x1, x2, n_grid: int = 257, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Discretized measure test for ``q(t) = <∇²f(x1 + t Δ) Δ, Δ>`` with ``Δ = x2 - x1``.

    Raises
    ------
    HessianUnavailable
        If ``hess`` is missing or returns a non-finite matrix.
    """
    if hess is None:
        raise HessianUnavailable("no Hessian oracle supplied")
    if n_grid < 3:
        raise ValueError("n_grid must be >= 3")
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    d = x2 - x1
    ts = np.linspace(0.0, 1.0, n_grid)
    q = np.empty(n_grid)
    for k, t in enumerate(ts):
        H = np.asarray(hess(x1 + t * d), dtype=float).reshape(d.size, d.size)
        if not np.all(np.isfinite(H)):
            raise HessianUnavailable(f"Hessian is not finite at {(x1 + t * d).tolist()}")
        q[k] = d @ H @ d
    profile = SecondOrderProfile(ts, q, tol.strict_margin)
    status, witness = _dyadic_scan(ts, q, tol)
    details = {"fraction_positive": profile.fraction_positive, "profile": profile.to_dict()}
    if witness is not None:
        witness.update({"x1": x1.tolist(), "x2": x2.tolist()})
        return Verdict(Status.REFUTED, witness, samples_used=n_grid, margin=float(q.min()), details=details)
    return Verdict(status, samples_used=n_grid, margin=float(q.min()), details=details)
