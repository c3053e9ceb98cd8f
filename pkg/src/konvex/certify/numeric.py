"""Local minimization used for proximal points and tilted minimizers."""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from ..core.blackbox import BlackBoxConvex
from ..errors import MinimizationDiverged


def _grad(f: BlackBoxConvex, W):
    if f.vectorized:
        return np.asarray(f.grad(W), dtype=float).reshape(W.shape)
    return np.array([np.asarray(f.grad(w), dtype=float).reshape(f.dim) for w in W])


def _hess(f: BlackBoxConvex, W):
    n = f.dim
    if f.vectorized:
        return np.asarray(f.hess(W), dtype=float).reshape(len(W), n, n)
    return np.array([np.asarray(f.hess(w), dtype=float).reshape(n, n) for w in W])


def batched_newton(f: BlackBoxConvex, W0, b, c=0.0, gtol=1e-12, max_iter=200, blowup=1e8):
    """Minimize ``phi_k(w) = f(w) + c |w|^2 / 2 - <b_k, w>`` for every row ``b_k``.

    Damped Newton with Armijo backtracking that keeps iterates inside
    ``dom f``; a tiny Levenberg shift handles singular Hessians.  Requires
    ``f.grad`` and ``f.hess``.

    Returns
    -------
    W : ndarray
        Located minimizers.
    diverged : ndarray of bool
        Rows whose iterates left every bounded set (``|w| > blowup``).
    """
    W = np.array(W0, dtype=float, copy=True).reshape(-1, f.dim)
    b = np.asarray(b, dtype=float).reshape(W.shape)
    eye = np.eye(f.dim)

    def phi(X):
        with np.errstate(all="ignore"):
            return f.values(X) + 0.5 * c * np.sum(X * X, axis=1) - np.sum(b_act * X, axis=1)

    active = np.ones(len(W), dtype=bool)
    diverged = np.zeros(len(W), dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        X, b_act = W[idx], b[idx]
        g = _grad(f, X) + c * X - b_act
        gn = np.linalg.norm(g, axis=1)
        done = gn <= gtol * (1 + np.linalg.norm(b_act, axis=1))
        H = _hess(f, X) + c * eye
        shift = 1e-14 * (1 + np.abs(H).max(axis=(1, 2)))
        step = -np.linalg.solve(H + shift[:, None, None] * eye, g[:, :, None])[:, :, 0]
        f0 = phi(X)
        slope = np.sum(g * step, axis=1)
        alpha = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        for _ in range(60):
            trial = X + alpha[:, None] * step
            ft = phi(trial)
            ok = np.isfinite(ft) & (ft <= f0 + 1e-4 * alpha * slope + 1e-15 * np.abs(f0))
            accepted |= ok
            if accepted.all():
                break
            alpha = np.where(accepted, alpha, alpha / 2)
        new = X + np.where(accepted, alpha, 0.0)[:, None] * step
        tiny = np.linalg.norm(new - X, axis=1) <= 1e-15 * (1 + np.linalg.norm(X, axis=1))
        W[idx] = new
        big = np.linalg.norm(new, axis=1) > blowup
        diverged[idx[big]] = True
        active[idx[done | tiny | big | ~accepted]] = False
    return W, diverged


def scipy_minimize(f: BlackBoxConvex, w0, b, c=0.0, bounds=None):
    """Fallback when no Hessian is known: L-BFGS-B on the same objective."""
    b = np.asarray(b, dtype=float)

    def obj(w):
        v = f(w) + 0.5 * c * w @ w - b @ w
        return v if np.isfinite(v) else 1e300

    jac = None
    if f.grad is not None:
        def jac(w):
            return np.asarray(f.grad(w), dtype=float).reshape(f.dim) + c * w - b
    res = minimize(obj, np.asarray(w0, dtype=float), jac=jac, method="L-BFGS-B", bounds=bounds,
                   options={"gtol": 1e-12, "ftol": 1e-15, "maxiter": 10_000})
    if np.linalg.norm(res.x) > 1e8:
        raise MinimizationDiverged("iterates escaped every bounded set")
    return res.x


def anchor_point(f: BlackBoxConvex) -> np.ndarray:
    """A deterministic point of ``dom ∂f`` used as a starting point."""
    from ..core.blackbox import make_rng

    region = f.subdiff_domain or f.sampling_region()
    pts = region.sample(make_rng(0, 99), 64)
    vals = f.values(pts)
    ok = np.flatnonzero(np.isfinite(vals))
    if ok.size == 0:
        raise MinimizationDiverged("no finite starting point found in the sampling region")
    return pts[ok[0]]


def prox_blackbox(f: BlackBoxConvex, X, lam) -> np.ndarray:
    """``prox_{lam f}`` at every row of ``X`` (strongly convex subproblems)."""
    X = np.asarray(X, dtype=float).reshape(-1, f.dim)
    start = np.tile(anchor_point(f), (len(X), 1))
    if f.grad is not None and f.hess is not None:
        W, _ = batched_newton(f, start, X / lam, c=1.0 / lam)
        return W
    return np.array([scipy_minimize(f, s, x / lam, c=1.0 / lam) for s, x in zip(start, X)])


def envelope_blackbox(f: BlackBoxConvex, X, lam):
    """Return ``(e_lam f(X), prox_{lam f}(X))`` row by row."""
    X = np.asarray(X, dtype=float).reshape(-1, f.dim)
    P = prox_blackbox(f, X, lam)
    return f.values(P) + np.sum((X - P) ** 2, axis=1) / (2 * lam), P
