"""Extended reals, tolerance policy and the :class:`Verdict` record.

Extended reals are plain Python numbers (floats, ints or
:class:`fractions.Fraction`) with ``math.inf`` playing the role of
``PLUS_INFINITY``.  Minus infinity and NaN are rejected by :func:`extreal`,
so every function built on top of this module is proper.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

PLUS_INFINITY = math.inf


def extreal(value) -> Any:
    """Validate ``value`` as an element of ``R ∪ {+inf}`` and return it."""
    if isinstance(value, (float, np.floating)):
        if math.isnan(value) or value == -math.inf:
            raise ValueError(f"{value!r} is not an extended real (proper functions only)")
        return float(value)
    return value


def ext_add(a, b):
    """Sum in ``R ∪ {+inf}``; total, commutative and associative."""
    a, b = extreal(a), extreal(b)
    if a == PLUS_INFINITY or b == PLUS_INFINITY:
        return PLUS_INFINITY
    return a + b


def is_finite(value) -> bool:
    return value != PLUS_INFINITY


@dataclass(frozen=True)
class Tolerance:
    """Numerical tolerance policy.

    ``eq_abs``/``eq_rel`` define approximate equality, ``strict_margin`` is the
    smallest slack accepted as evidence of a strict inequality and ``fd_step``
    is the default finite-difference step.
    """

    eq_abs: float = 1e-9
    eq_rel: float = 1e-9
    strict_margin: float = 1e-9
    fd_step: float = 1e-4

    def __post_init__(self):
        for name in ("eq_abs", "eq_rel", "strict_margin", "fd_step"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"Tolerance.{name} must be finite and > 0, got {v!r}")

    def eq_tol(self, scale=0.0) -> float:
        """Equality threshold for quantities of magnitude ``scale``."""
        return self.eq_abs + self.eq_rel * abs(float(scale))

    def replace(self, **changes) -> "Tolerance":
        d = {k: getattr(self, k) for k in ("eq_abs", "eq_rel", "strict_margin", "fd_step")}
        d.update(changes)
        return Tolerance(**d)


DEFAULT_TOL = Tolerance()


class Status(str, enum.Enum):
    CERTIFIED = "CERTIFIED"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __str__(self):
        return self.value


def judge_strict(slack, tol: Tolerance, scale=0.0) -> Status:
    """Classify the claim ``slack > 0``.

    Slack at or below the roundoff band ``eq_rel * scale`` counts as a
    refutation: exact affine pieces produce zeros up to roundoff in the
    magnitudes involved, and those are precisely the failures of strictness
    we want to catch.  Positive slack that does not clear ``strict_margin``
    is left undecided.  Pass a dimensionless slack (see :func:`cosine`) with
    ``scale=1`` when no natural magnitude exists.
    """
    slack = float(slack)
    if slack <= tol.eq_rel * abs(float(scale)):
        return Status.REFUTED
    if slack > tol.strict_margin:
        return Status.CERTIFIED
    return Status.INCONCLUSIVE


def judge_strict_array(slack, tol: Tolerance, scale=0.0):
    """Vectorised :func:`judge_strict`.

    Returns ``(first_refuted, any_inconclusive)`` where ``first_refuted`` is
    the index of the first refuting entry or ``None``.
    """
    slack = np.asarray(slack, dtype=float)
    band = tol.eq_rel * np.abs(np.asarray(scale, dtype=float))
    refuted = np.flatnonzero(slack <= band)
    inconclusive = bool(np.any((slack > band) & (slack <= tol.strict_margin)))
    return (int(refuted[0]) if refuted.size else None), inconclusive


def cosine(ip, norm_product):
    """``ip / norm_product``, with ``0`` where the product vanishes.

    Strict monotonicity claims ``<Δx, Δv> > 0`` are judged on this
    dimensionless ratio so that close sample pairs are not mistaken for
    equality; a vanishing ``Δv`` gives ``0`` and therefore refutes.
    """
    ip = np.asarray(ip, dtype=float)
    norm_product = np.asarray(norm_product, dtype=float)
    safe = np.where(norm_product > 0, norm_product, 1.0)
    return np.where(norm_product > 0, ip / safe, 0.0)


def judge_weak(slack, tol: Tolerance, scale=0.0) -> Status:
    """Classify the claim ``slack >= 0``."""
    return Status.REFUTED if float(slack) < -tol.eq_tol(scale) else Status.CERTIFIED


@dataclass
class Verdict:
    """Outcome of a certifier.

    ``margin`` is the smallest slack observed (``inf`` for exact checks),
    ``samples_used`` counts the sampled configurations actually examined and
    ``witness`` carries enough data to re-evaluate a refutation.
    """

    status: Status
    witness: Optional[dict] = None
    samples_used: int = 0
    margin: float = PLUS_INFINITY
    reason: Optional[str] = None
    sampled: bool = True
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.status = Status(self.status)
        if self.status is Status.REFUTED and self.witness is None:
            raise ValueError("a REFUTED verdict needs a witness")

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE

    @classmethod
    def exact(cls, status, witness=None, reason=None, **details):
        return cls(Status(status), witness=witness, samples_used=0,
                   margin=PLUS_INFINITY, reason=reason, sampled=False, details=details)

    def label(self) -> str:
        if self.status is Status.CERTIFIED and self.sampled:
            return "CERTIFIED(sampled)"
        return self.status.value

    def to_dict(self) -> dict:
        from .serialize import to_jsonable

        return to_jsonable({
            "status": self.status.value,
            "label": self.label(),
            "sampled": self.sampled,
            "samples_used": int(self.samples_used),
            "margin": self.margin,
            "reason": self.reason,
            "witness": self.witness,
            "details": self.details,
        })

    def __repr__(self):
        return (f"Verdict({self.label()}, samples_used={self.samples_used}, "
                f"margin={self.margin!r}, reason={self.reason!r})")
