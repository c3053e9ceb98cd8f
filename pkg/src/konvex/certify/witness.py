"""Witness and profile records produced by the certifiers."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..core.serialize import to_jsonable


class WitnessKind(str, enum.Enum):
    AFFINE_SEGMENT = "AFFINE_SEGMENT"
    STRICTNESS_FAIL = "STRICTNESS_FAIL"
    SUBGRADIENT_EQUALITY = "SUBGRADIENT_EQUALITY"


@dataclass
class SegmentWitness:
    """A segment ``[x0, x1]`` on which a strict inequality failed.

    ``lam`` and ``slack`` locate the failing chord point
    ``lam x0 + (1 - lam) x1``; ``values`` are function values sampled
    along the segment at parameters ``ts`` (``t = 0`` is ``x0``).
    """

    x0: np.ndarray
    x1: np.ndarray
    kind: WitnessKind
    lam: float = 0.5
    slack: float = 0.0
    ts: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def __post_init__(self):
        self.x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        self.x1 = np.atleast_1d(np.asarray(self.x1, dtype=float))
        self.kind = WitnessKind(self.kind)
        if np.array_equal(self.x0, self.x1):
            raise ValueError("segment witness needs distinct endpoints")

    def to_dict(self) -> dict:
        return to_jsonable({"kind": self.kind.value, "x0": self.x0, "x1": self.x1, "lam": self.lam,
                            "slack": self.slack, "ts": list(self.ts), "values": list(self.values)})

    @classmethod
    def from_dict(cls, d: dict) -> "SegmentWitness":
        return cls(d["x0"], d["x1"], d["kind"], d.get("lam", 0.5), d.get("slack", 0.0),
                   d.get("ts", []), d.get("values", []))


@dataclass
class SecondOrderProfile:
    """Second-derivative (or Hessian quadratic form) samples along a segment."""

    ts: np.ndarray
    values: np.ndarray
    strict_margin: float

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.ts.shape != self.values.shape:
            raise ValueError("ts and values must have the same shape")
        if self.ts.size and (self.ts.min() < 0 or self.ts.max() > 1):
            raise ValueError("profile parameters must lie in [0, 1]")

    @property
    def fraction_positive(self) -> float:
        if self.values.size == 0:
            return 0.0
        return float(np.mean(self.values > self.strict_margin))

    def to_dict(self) -> dict:
        return to_jsonable({"ts": self.ts, "values": self.values, "strict_margin": self.strict_margin,
                            "fraction_positive": self.fraction_positive})
