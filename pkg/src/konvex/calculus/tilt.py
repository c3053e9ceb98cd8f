"""Sampled diagnostics for the tilt map ``x* -> argmin (f - <x*, .>)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..core.blackbox import Region, make_rng
from ..core.tolerance import DEFAULT_TOL, Tolerance
from ..errors import MultivaluedDetected


@dataclass
class TiltProbe:
    """Displacement table of a tilt-map probe.

    ``pairs[k] = (|dx*|, |d argmin|)``; ``modulus`` is the largest ratio.
    This is a diagnostic estimate, not a certificate.
    """

    pairs: np.ndarray
    modulus: float
    samples_used: int
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"pairs": self.pairs.tolist(), "modulus": self.modulus,
                "samples_used": self.samples_used, "details": self.details}


def _single_point(out, xstar, tol):
    if isinstance(out, (list, tuple)):
        pts = [np.atleast_1d(np.asarray(p, dtype=float)) for p in out]
        if not pts:
            raise MultivaluedDetected(f"tilt {xstar.tolist()} has no minimizer")
        for p in pts[1:]:
            if np.linalg.norm(p - pts[0]) > tol.eq_tol(np.linalg.norm(pts[0])):
                raise MultivaluedDetected(
                    f"tilt {xstar.tolist()} has distinct minimizers {pts[0].tolist()} and {p.tolist()}")
        return pts[0]
    return np.atleast_1d(np.asarray(out, dtype=float))


def tilt_continuity_probe(argmin_oracle: Callable, region: Region, n_samples: int = 200, seed: int = 0,
                          tol: Tolerance = DEFAULT_TOL) -> TiltProbe:
    """Estimate a Lipschitz modulus of the tilt map on ``region``.

    Parameters
    ----------
    argmin_oracle : callable
        ``x* -> minimizer`` (an array) or a list of minimizers; for a smooth
        conjugate this is ``∇f*``.
    region : Region
        Tilts are sampled here.
    n_samples : int
        Number of tilt pairs.

    Raises
    ------
    MultivaluedDetected
        If the oracle returns two minimizers farther apart than the tolerance.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = make_rng(seed)
    a, b = region.sample_segments(rng, n_samples)
    rows = []
    for xa, xb in zip(a, b):
        pa = _single_point(argmin_oracle(xa), xa, tol)
        pb = _single_point(argmin_oracle(xb), xb, tol)
        rows.append((float(np.linalg.norm(xa - xb)), float(np.linalg.norm(pa - pb))))
    pairs = np.asarray(rows)
    ok = pairs[:, 0] > 0
    modulus = float(np.max(pairs[ok, 1] / pairs[ok, 0])) if ok.any() else 0.0
    return TiltProbe(pairs, modulus, n_samples)
