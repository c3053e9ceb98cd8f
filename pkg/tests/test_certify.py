import math

import numpy as np
import pytest

from konvex.certify import (SegmentWitness, WitnessKind, affine_segment_subdiff_check, batched_newton,
                            certify_almost_strict_convexity, certify_strict_convexity_pl,
                            certify_strict_convexity_sampled, envelope_suite, flat_direction_probes, pl_as_blackbox,
                            second_order_test_1d, second_order_test_nd, segment_strict_monotonicity,
                            subgradient_strict_inequality_check, theorem_almost_suite, unique_minimizer_check)
from konvex.core import MINUS_INFINITY_SLOPE as M, PLUS_INFINITY_SLOPE as P, BlackBoxConvex, Box, PLConvex1D, Status
from konvex.gallery import get_fixture, sample_tilts

ABS = PLConvex1D((-1, 0, 1), (1, 0, 1), -1, 1)


def sq(dim=2):
    return BlackBoxConvex(dim, lambda x: float(x @ x), grad=lambda x: 2 * x, domain=Box(-np.ones(dim), np.ones(dim)))


class TestStrictConvexity:
    def test_square_norm_certified(self):
        v = certify_strict_convexity_sampled(sq(), n_triples=500)
        assert v.label() == "CERTIFIED(sampled)" and v.margin > 0

    def test_affine_refuted_with_affine_segment(self):
        f = BlackBoxConvex(2, lambda x: float(x[0] - x[1]), domain=Box([-1, -1], [1, 1]))
        v = certify_strict_convexity_sampled(f, n_triples=50)
        assert v.refuted and v.witness["kind"] == WitnessKind.AFFINE_SEGMENT.value

    def test_pl_exact(self):
        v = certify_strict_convexity_pl(ABS)
        assert v.refuted and not v.sampled
        assert certify_strict_convexity_pl(PLConvex1D((2,), (0,), M, P)).certified

    def test_rockafellar_boundary_ray(self):
        r = get_fixture("rockafellar2d")
        v = certify_strict_convexity_sampled(r.blackbox(), r.domain_region, 1000, seed=0)
        assert v.refuted and v.witness["kind"] == "AFFINE_SEGMENT"
        assert v.witness["x0"][1] == 0.0 and v.witness["x1"][1] == 0.0

    def test_witness_round_trip(self):
        w = SegmentWitness([0.0, 0.0], [1.0, 0.0], "AFFINE_SEGMENT", ts=[0, 1], values=[0.0, 0.0])
        assert SegmentWitness.from_dict(w.to_dict()).to_dict() == w.to_dict()
        with pytest.raises(ValueError):
            SegmentWitness([1.0], [1.0], "AFFINE_SEGMENT")


class TestAlmostStrict:
    def test_rockafellar_interior(self):
        r = get_fixture("rockafellar2d")
        v = certify_almost_strict_convexity(r.blackbox(), r.subdiff_region, 500, seed=1)
        assert v.certified and v.sampled

    def test_rank_one_flat_direction_found(self):
        r = get_fixture("rank_one2d")
        v = certify_almost_strict_convexity(r.blackbox(), r.subdiff_region, 100)
        assert v.refuted
        d = np.subtract(v.witness["x1"], v.witness["x0"])
        assert abs(d @ np.array(r.extra["c"])) <= 1e-9 * np.linalg.norm(d)

    def test_flat_probes_empty_for_sqnorm(self):
        f = get_fixture("sqnorm2d")
        a, b = flat_direction_probes(f.blackbox(), f.subdiff_region)
        assert len(a) == 0 and len(b) == 0

    def test_subgradient_inequality(self):
        assert subgradient_strict_inequality_check(sq(), n_pairs=200).certified
        assert subgradient_strict_inequality_check(pl_as_blackbox(ABS), n_pairs=200).refuted

    def test_affine_segment_subdiff(self):
        v = affine_segment_subdiff_check(pl_as_blackbox(ABS), np.array([0.5]), np.array([2.0]))
        assert v.certified

    def test_segment_monotonicity(self):
        r = get_fixture("rockafellar2d")
        assert segment_strict_monotonicity(r.blackbox(), r.subdiff_region, 100).certified
        h = get_fixture("huber")
        assert segment_strict_monotonicity(h.blackbox(), h.subdiff_region, 100).refuted


class TestSecondOrder:
    def test_quartic(self):
        assert second_order_test_1d(lambda x: 12 * x * x, -1, 1, 1025).certified

    def test_huber_tail_flat_patch(self):
        h = get_fixture("huber")
        v = second_order_test_1d(h.extra["fpp"], -4, 4)
        assert v.refuted and v.witness["kind"] == "FLAT_PATCH"
        lo, hi = v.witness["x_interval"]
        assert hi <= -1 or lo >= 1  # inside a linear tail

    def test_negative_curvature(self):
        assert second_order_test_1d(lambda x: -1.0 + 0 * x, 0, 1).refuted

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            second_order_test_1d(lambda x: x, 0, 1, n_grid=2)

    def test_nd_perpendicular(self):
        r = get_fixture("rank_one2d")
        c = np.array(r.extra["c"], dtype=float)
        assert second_order_test_nd(r.function.hess, np.zeros(2), np.array([c[1], -c[0]])).refuted
        assert second_order_test_nd(r.function.hess, np.zeros(2), c).certified


class TestNumeric:
    def test_newton_quadratic(self):
        f = BlackBoxConvex(2, lambda x: float(x @ x), grad=lambda x: 2 * x, hess=lambda x: 2 * np.eye(2))
        W, div = batched_newton(f, np.ones((3, 2)), np.array([[2.0, 0.0]] * 3))
        np.testing.assert_allclose(W, [[1.0, 0.0]] * 3, atol=1e-10)
        assert not div.any()


class TestSuites:
    @pytest.mark.parametrize("name", ["rockafellar2d", "rank_one2d", "huber", "quartic", "pl:abs"])
    def test_theorem_almost_coherent(self, name):
        rep = theorem_almost_suite(get_fixture(name), n_segments=150)
        assert rep["coherent"] and rep["agreement"]

    def test_envelope_suite_abs(self):
        rep = envelope_suite(get_fixture("pl:abs"), 1.0)
        assert rep["coherent"]
        assert {c["status"] for c in rep["conditions"]} == {"REFUTED"}

    def test_unique_minimizer(self):
        r = get_fixture("rockafellar2d")
        assert unique_minimizer_check(r, sample_tilts(r, 5), n_starts=8).certified
        ind = get_fixture("pl:indicator01")
        v = unique_minimizer_check(ind, sample_tilts(ind, 5), n_starts=8)
        assert v.refuted

    def test_reports_are_deterministic(self):
        a = theorem_almost_suite(get_fixture("quartic"), seed=3, n_segments=50)
        b = theorem_almost_suite(get_fixture("quartic"), seed=3, n_segments=50)
        assert a == b


def test_pl_blackbox_infinite_outside_domain():
    f = pl_as_blackbox(PLConvex1D((0, 1), (0, 0), M, P))
    assert math.isinf(f(np.array([2.0]))) and f(np.array([0.5])) == 0.0
