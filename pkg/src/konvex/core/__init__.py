"""Extended reals, tolerances, verdicts and the function representations."""
from .blackbox import (BlackBoxConvex, Box, Mapped, Predicate, Region, Union, chord_slack,
                       make_rng, midpoint_convexity_check, parse_region, recheck_chord_witness)
from .pl import (MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE, InfiniteSlope, Interval, PLConvex1D,
                 pl_eval, pl_eval_array, pl_from_points, pl_subdiff)
from .polyline import (HORIZONTAL, VERTICAL, MonotonePolyline, canonicalize, pl_to_polyline,
                       polyline_to_pl, polyline_values)
from .serialize import (dumps, pl_dumps, pl_from_dict, pl_loads, pl_to_dict, polyline_dumps,
                        polyline_from_dict, polyline_loads, polyline_to_dict, to_jsonable)
from .tolerance import (DEFAULT_TOL, PLUS_INFINITY, Status, Tolerance, Verdict, ext_add, extreal,
                        judge_strict, judge_strict_array, judge_weak, cosine)

__all__ = [
    "BlackBoxConvex", "Box", "Mapped", "Predicate", "Region", "Union", "chord_slack", "make_rng",
    "midpoint_convexity_check", "parse_region", "recheck_chord_witness",
    "MINUS_INFINITY_SLOPE", "PLUS_INFINITY_SLOPE", "InfiniteSlope", "Interval", "PLConvex1D",
    "pl_eval", "pl_eval_array", "pl_from_points", "pl_subdiff",
    "HORIZONTAL", "VERTICAL", "MonotonePolyline", "canonicalize", "pl_to_polyline",
    "polyline_to_pl", "polyline_values",
    "dumps", "pl_dumps", "pl_from_dict", "pl_loads", "pl_to_dict", "polyline_dumps",
    "polyline_from_dict", "polyline_loads", "polyline_to_dict", "to_jsonable",
    "DEFAULT_TOL", "PLUS_INFINITY", "Status", "Tolerance", "Verdict", "ext_add", "extreal",
    "judge_strict", "judge_strict_array", "judge_weak", "cosine",
]
