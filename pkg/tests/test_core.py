import json
import math
from fractions import Fraction

import numpy as np
import pytest

from konvex.core import (DEFAULT_TOL, HORIZONTAL, MINUS_INFINITY_SLOPE as M, PLUS_INFINITY, PLUS_INFINITY_SLOPE as P,
                         BlackBoxConvex, Box, Interval, Mapped, MonotonePolyline, PLConvex1D, Status, Tolerance,
                         Union, Verdict, canonicalize, chord_slack, cosine, ext_add, extreal, judge_strict, make_rng,
                         midpoint_convexity_check, parse_region, pl_dumps, pl_eval, pl_eval_array, pl_loads,
                         pl_subdiff, pl_to_polyline, polyline_dumps, polyline_loads, polyline_to_pl,
                         recheck_chord_witness)
from konvex.errors import EmptySampleRegion

from oracles import subgradient_interval_grid

ABS = PLConvex1D((-1, 0, 1), (1, 0, 1), -1, 1)
IND01 = PLConvex1D((0, 1), (0, 0), M, P)


class TestExtReal:
    def test_plus_infinity_absorbs(self):
        assert ext_add(1.5, PLUS_INFINITY) == PLUS_INFINITY
        assert ext_add(PLUS_INFINITY, PLUS_INFINITY) == PLUS_INFINITY

    def test_minus_infinity_rejected(self):
        with pytest.raises(ValueError):
            extreal(-math.inf)


class TestTolerance:
    def test_fields_positive(self):
        with pytest.raises(ValueError):
            Tolerance(eq_abs=0.0)
        with pytest.raises(ValueError):
            Tolerance(strict_margin=-1.0)

    def test_strict_judgement(self):
        assert judge_strict(0.0, DEFAULT_TOL) is Status.REFUTED
        assert judge_strict(-1.0, DEFAULT_TOL) is Status.REFUTED
        assert judge_strict(1e-3, DEFAULT_TOL) is Status.CERTIFIED
        assert judge_strict(5e-10, DEFAULT_TOL) is Status.INCONCLUSIVE
        # roundoff relative to the magnitudes involved still counts as zero
        assert judge_strict(1e-7, DEFAULT_TOL, scale=1e3) is Status.REFUTED

    def test_cosine_zero_denominator(self):
        np.testing.assert_array_equal(cosine([0.0, 2.0], [0.0, 4.0]), [0.0, 0.5])

    def test_refuted_needs_witness(self):
        with pytest.raises(ValueError):
            Verdict(Status.REFUTED)

    def test_exact_verdict_margin_sentinel(self):
        v = Verdict.exact(Status.CERTIFIED)
        assert v.margin == PLUS_INFINITY and not v.sampled
        assert v.to_dict()["margin"] == "inf"


class TestPLConvex1D:
    def test_eval_examples(self):
        assert pl_eval(ABS, 2) == 2
        assert pl_eval(IND01, 2) == PLUS_INFINITY
        # tail extension: f(1) + 2 (3 - 1)
        assert pl_eval(PLConvex1D((0, 1), (0, 1), 0, 2), 3) == 5

    def test_rejects_nonconvex(self):
        with pytest.raises(ValueError):
            PLConvex1D((0, 1, 2), (0, 1, 1), 0, 2)
        with pytest.raises(ValueError):
            PLConvex1D((0, 1), (0, 1), 2, 3)
        with pytest.raises(ValueError):
            PLConvex1D((1, 0), (0, 0), 0, 0)

    def test_subdiff_examples(self):
        # frozen from a grid search over candidate slopes
        lo, hi = subgradient_interval_grid(ABS, 0.0, np.linspace(-2, 2, 4001), np.linspace(-5, 5, 1001))
        assert (lo, hi) == (-1.0, 1.0)
        s = pl_subdiff(ABS, 0)
        assert (s.lo, s.hi) == (-1, 1)
        s = pl_subdiff(ABS, 3)
        assert (s.lo, s.hi) == (1, 1)
        s = pl_subdiff(IND01, 1)
        assert (s.lo, s.hi) == (0, math.inf)
        assert pl_subdiff(IND01, 2).is_empty

    def test_vectorized_eval_matches_scalar(self):
        xs = np.linspace(-3, 3, 61)
        np.testing.assert_array_equal(pl_eval_array(ABS, xs), [float(pl_eval(ABS, x)) for x in xs])

    def test_rational_mode_is_exact(self):
        f = PLConvex1D((Fraction(1, 3), Fraction(2, 3)), (Fraction(0), Fraction(1, 7)), Fraction(-1), Fraction(1))
        assert pl_eval(f, Fraction(1, 2)) == Fraction(1, 14)


class TestPolyline:
    def test_abs_slope_diagram(self):
        g = canonicalize(pl_to_polyline(ABS))
        assert [tuple(map(float, v)) for v in g.vertices] == [(0.0, -1.0), (0.0, 1.0)]
        assert g.head_ray[1] == 0 and g.tail_ray[1] == 0

    def test_indicator_normal_cone(self):
        g = pl_to_polyline(IND01)
        assert [tuple(map(float, v)) for v in g.vertices] == [(0.0, 0.0), (1.0, 0.0)]
        assert g.head_ray[0] == 0 and g.tail_ray[0] == 0

    def test_affine_is_horizontal_line(self):
        g = canonicalize(pl_to_polyline(PLConvex1D((0,), (0,), 1, 1)))
        assert len(g.vertices) == 1 and float(g.vertices[0][1]) == 1.0
        assert g.head_ray[1] == 0 and g.tail_ray[1] == 0

    def test_horizontal_line_integrates_to_affine(self):
        f = polyline_to_pl(MonotonePolyline(((0, 3),), HORIZONTAL, HORIZONTAL), 0, 0)
        assert pl_eval(f, 2) == 6 and pl_eval(f, -1) == -3

    def test_round_trip_abs(self):
        f = polyline_to_pl(pl_to_polyline(ABS), 0, 0)
        for x in (-2, -1, 0, 0.5, 3):
            assert pl_eval(f, x) == pl_eval(ABS, x)

    def test_identity_graph_gives_quadratic_chords(self):
        xs = [Fraction(k, 4) for k in range(-8, 9)]
        g = MonotonePolyline(tuple((x, x) for x in xs), (1, 1), (1, 1))
        f = polyline_to_pl(g, 0, 0)
        for x in xs:
            assert pl_eval(f, x) == x * x / 2

    def test_rejects_decreasing(self):
        with pytest.raises(ValueError):
            MonotonePolyline(((0, 1), (1, 0)), HORIZONTAL, HORIZONTAL)


class TestSerialization:
    def test_pl_round_trip_bit_exact(self):
        f = PLConvex1D((0.1, 0.30000000000000004), (1 / 3, 2 / 3), M, 5.0)
        g = pl_loads(pl_dumps(f))
        assert g == f

    def test_rational_round_trip(self):
        f = PLConvex1D((Fraction(1, 3),), (Fraction(-2, 5),), Fraction(-1, 2), P)
        d = json.loads(pl_dumps(f))
        assert d["breakpoints"] == ["1/3"] and d["right_tail"] == "inf"
        assert pl_loads(pl_dumps(f)) == f

    def test_polyline_round_trip(self):
        g = pl_to_polyline(IND01)
        assert polyline_loads(polyline_dumps(g)) == g

    def test_missing_field(self):
        with pytest.raises(ValueError, match="left_tail"):
            pl_loads('{"breakpoints": [0], "values": [0], "right_tail": 1}')


class TestRegions:
    def test_box_sampling_deterministic(self):
        b = Box([0, 0], [1, 2])
        a1 = b.sample(make_rng(3), 50)
        a2 = b.sample(make_rng(3), 50)
        np.testing.assert_array_equal(a1, a2)
        assert np.all((a1 >= [0, 0]) & (a1 <= [1, 2]))

    def test_boundary_weight_hits_faces(self):
        pts = Box([0.0], [1.0], boundary_weight=0.5).sample(make_rng(0), 400)
        assert np.any(pts == 0.0) and np.any(pts == 1.0)

    def test_union_segments_stay_in_one_component(self):
        u = Union([Box([-3.0], [0.0]), Box([1.0], [4.0])])
        a, b = u.sample_segments(make_rng(0), 200)
        same = (a <= 0) == (b <= 0)
        assert np.all(same)

    def test_mapped_region(self):
        A = np.array([[1.0, -1.0], [0.0, 1.0]])
        m = Mapped(Box([0, 0], [1, 1]), A)
        pts = m.sample(make_rng(0), 100)
        back = pts @ np.linalg.inv(A).T
        assert np.all((back >= -1e-12) & (back <= 1 + 1e-12))
        assert all(m.contains(p) for p in pts[:10])

    def test_parse_region(self):
        b = parse_region("0.1..10,-1..1")
        np.testing.assert_array_equal(b.lo, [0.1, -1.0])
        with pytest.raises(ValueError):
            parse_region("0.1-10")


class TestMidpointConvexity:
    def test_sqnorm_certified(self):
        f = BlackBoxConvex(2, lambda x: float(x @ x), domain=Box([-3, -3], [3, 3]))
        assert midpoint_convexity_check(f, 1000, 0).certified

    def test_concave_refuted_with_rechecked_witness(self):
        f = BlackBoxConvex(2, lambda x: -float(x @ x), domain=Box([-3, -3], [3, 3]))
        v = midpoint_convexity_check(f, 1000, 0)
        assert v.refuted
        assert recheck_chord_witness(f, v.witness) < 0

    def test_chord_slack_affine_zero(self):
        f = BlackBoxConvex(1, lambda x: 3 * float(x[0]) + 1)
        slack, *_ = chord_slack(f, np.array([[0.0]]), np.array([[2.0]]), np.array([0.5]))
        assert slack[0] == 0.0

    def test_empty_region(self):
        f = BlackBoxConvex(1, lambda x: math.inf, domain=Box([0.0], [1.0]))
        with pytest.raises(EmptySampleRegion):
            midpoint_convexity_check(f, 10, 0)


def test_interval_representatives_bounded():
    reps = Interval(0.0, math.inf).representatives()
    assert reps[0] == 0.0 and all(np.isfinite(reps))
