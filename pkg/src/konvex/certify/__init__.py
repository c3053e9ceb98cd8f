"""Certifiers for strict and almost strict convexity and the theorem suites."""
from .convexity import (affine_segment_subdiff_check, certify_almost_strict_convexity,
                        certify_strict_convexity_pl, certify_strict_convexity_sampled, flat_direction_probes,
                        pl_as_blackbox, subgradient_strict_inequality_check)
from .numeric import batched_newton, envelope_blackbox, prox_blackbox
from .second_order import second_order_test_1d, second_order_test_nd
from .suites import (envelope_suite, segment_strict_monotonicity, subdifferential_graph, theorem_almost_suite,
                     unique_minimizer_check)
from .witness import SecondOrderProfile, SegmentWitness, WitnessKind

__all__ = [
    "affine_segment_subdiff_check", "certify_almost_strict_convexity", "certify_strict_convexity_pl",
    "certify_strict_convexity_sampled", "flat_direction_probes", "pl_as_blackbox", "subgradient_strict_inequality_check",
    "batched_newton", "envelope_blackbox", "prox_blackbox",
    "second_order_test_1d", "second_order_test_nd",
    "envelope_suite", "segment_strict_monotonicity", "subdifferential_graph", "theorem_almost_suite",
    "unique_minimizer_check",
    "SecondOrderProfile", "SegmentWitness", "WitnessKind",
]
