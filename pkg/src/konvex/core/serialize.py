"""JSON encodings of the 1-D representations.

Infinite values and tail sentinels are written as the strings ``"inf"`` and
``"-inf"``; exact rationals as ``"p/q"`` strings.  Finite doubles are written
with ``repr`` precision, so float data round-trip bit-exactly.
"""
from __future__ import annotations

import enum
import json
import math
from fractions import Fraction

import numpy as np

from .pl import MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE, InfiniteSlope, Interval, PLConvex1D
from .polyline import MonotonePolyline


def _num_out(v):
    if isinstance(v, InfiniteSlope):
        return v.value
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


def _num_in(v):
    if isinstance(v, str):
        if v in ("inf", "+inf"):
            return math.inf
        if v == "-inf":
            return -math.inf
        return Fraction(v)
    if isinstance(v, bool):
        raise ValueError("booleans are not numbers here")
    if isinstance(v, (int, float)):
        return v
    raise ValueError(f"not a number: {v!r}")


def to_jsonable(obj):
    """Recursively convert numpy data, enums, infinities and rationals to JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Interval):
        return {"lo": _num_out(obj.lo), "hi": _num_out(obj.hi), "empty": obj.is_empty}
    if isinstance(obj, InfiniteSlope):
        return obj.value
    if isinstance(obj, enum.Enum):
        return obj.value
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return _num_out(obj)


def dumps(obj, **kw) -> str:
    """Deterministic JSON text (sorted keys, no NaN/inf literals)."""
    return json.dumps(to_jsonable(obj), sort_keys=True, allow_nan=False, **kw)


def pl_to_dict(f: PLConvex1D) -> dict:
    return {"breakpoints": [_num_out(x) for x in f.breakpoints],
            "values": [_num_out(v) for v in f.values],
            "left_tail": _num_out(f.left_tail),
            "right_tail": _num_out(f.right_tail)}


def pl_from_dict(d: dict) -> PLConvex1D:
    for key in ("breakpoints", "values", "left_tail", "right_tail"):
        if key not in d:
            raise ValueError(f"PLConvex1D JSON is missing field {key!r}")
    lt, rt = d["left_tail"], d["right_tail"]
    left = MINUS_INFINITY_SLOPE if lt == "-inf" else _num_in(lt)
    right = PLUS_INFINITY_SLOPE if rt in ("inf", "+inf") else _num_in(rt)
    return PLConvex1D(tuple(_num_in(x) for x in d["breakpoints"]),
                      tuple(_num_in(v) for v in d["values"]), left, right)


def polyline_to_dict(g: MonotonePolyline) -> dict:
    return {"vertices": [[_num_out(x), _num_out(y)] for x, y in g.vertices],
            "head_ray": [_num_out(c) for c in g.head_ray],
            "tail_ray": [_num_out(c) for c in g.tail_ray]}


def polyline_from_dict(d: dict) -> MonotonePolyline:
    for key in ("vertices", "head_ray", "tail_ray"):
        if key not in d:
            raise ValueError(f"MonotonePolyline JSON is missing field {key!r}")
    return MonotonePolyline(tuple((_num_in(x), _num_in(y)) for x, y in d["vertices"]),
                            tuple(_num_in(c) for c in d["head_ray"]),
                            tuple(_num_in(c) for c in d["tail_ray"]))


def pl_dumps(f: PLConvex1D) -> str:
    return json.dumps(pl_to_dict(f))


def pl_loads(text: str) -> PLConvex1D:
    return pl_from_dict(json.loads(text))


def polyline_dumps(g: MonotonePolyline) -> str:
    return json.dumps(polyline_to_dict(g))


def polyline_loads(text: str) -> MonotonePolyline:
    return polyline_from_dict(json.loads(text))
