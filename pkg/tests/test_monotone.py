import numpy as np
import pytest

from konvex.core import HORIZONTAL, VERTICAL, Box, MonotonePolyline, Status
from konvex.errors import NotMonotone, SingularMatrix
from konvex.gallery import get_fixture, operator_fixtures
from konvex.monotone import (FiniteOperatorGraph, OperatorOracle, check_almost_strictly_monotone,
                             check_disjoint_images, check_injective_map, check_inverse_single_valued,
                             check_monotone, check_paramonotone, check_strictly_monotone,
                             check_strictly_monotone_map, check_strictly_nonexpansive, para_equivalence_suite,
                             resolvent_linear2d, resolvent_polyline)

from oracles import brute_resolvent_2d

SKEW = np.array([[0.0, 1.0], [-1.0, 0.0]])


def linear_graph(A, n=30, seed=0):
    X = np.random.default_rng(seed).uniform(-2, 2, (n, 2))
    return FiniteOperatorGraph(2, X, X @ np.asarray(A).T)


class TestGraph:
    def test_duplicate_pair_rejected(self):
        with pytest.raises(ValueError):
            FiniteOperatorGraph.from_pairs([(0.0, 1.0), (0.0, 1.0)])

    def test_multivalued_point_allowed(self):
        g = FiniteOperatorGraph.from_pairs([(0.0, -1.0), (0.0, 1.0)])
        assert len(g) == 2

    def test_json_round_trip(self):
        g = linear_graph(SKEW, 5)
        h = FiniteOperatorGraph.loads(g.dumps({"note": "skew"}))
        np.testing.assert_array_equal(h.X, g.X)
        np.testing.assert_array_equal(h.V, g.V)


class TestPairwise:
    def test_identity_strictly_monotone(self):
        assert check_strictly_monotone(linear_graph(np.eye(2))).certified

    def test_skew_monotone_but_not_strictly(self):
        g = linear_graph(SKEW)
        assert check_monotone(g).certified
        v = check_strictly_monotone(g)
        assert v.refuted and v.witness["inner_product"] == pytest.approx(0.0, abs=1e-12)

    def test_decreasing_not_monotone(self):
        g = FiniteOperatorGraph.from_pairs([(0.0, 1.0), (1.0, 0.0)])
        assert check_monotone(g).refuted
        with pytest.raises(NotMonotone):
            check_paramonotone(g)

    def test_skew_not_paramonotone(self):
        assert check_paramonotone(linear_graph(SKEW)).refuted

    def test_abs_subdiff_paramonotone(self):
        g = FiniteOperatorGraph.from_pairs([(0.0, -1.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (-1.0, -1.0)])
        assert check_paramonotone(g).certified
        assert check_disjoint_images(g).refuted

    def test_almost_strict_skips_segments_outside_domain(self):
        oracle = OperatorOracle(1, lambda x: [x] if (x[0] <= 0 or x[0] >= 1) else [])
        g = oracle.graph(np.array([[-1.0], [2.0]]))
        v = check_almost_strictly_monotone(g, oracle)
        assert v.certified and v.details["segments_in_domain"] == 0


class TestResolvents:
    def test_skew_closed_form(self):
        J = resolvent_linear2d(SKEW)
        np.testing.assert_allclose(J, 0.5 * np.array([[1, -1], [1, 1]]), atol=1e-15)
        # frozen from Cramer's rule
        np.testing.assert_allclose(J @ [1.0, 0.0], brute_resolvent_2d(SKEW.tolist(), [1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(J @ [0.0, 1.0], brute_resolvent_2d(SKEW.tolist(), [0.0, 1.0]), atol=1e-15)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            resolvent_linear2d(-np.eye(2))

    def test_polyline_resolvent_of_sign(self):
        # subdifferential of |x|: resolvent is soft thresholding
        g = MonotonePolyline(((0, -1), (0, 1)), HORIZONTAL, HORIZONTAL)
        r = resolvent_polyline(g, 1.0)
        assert [tuple(map(float, v)) for v in r.vertices] == [(-1.0, 0.0), (1.0, 0.0)]

    def test_polyline_resolvent_normal_cone(self):
        g = MonotonePolyline(((0, 0), (1, 0)), VERTICAL, VERTICAL)
        r = resolvent_polyline(g, 2.0)
        assert [tuple(map(float, v)) for v in r.vertices] == [(0.0, 0.0), (1.0, 1.0)]


class TestMaps:
    region = Box([-3.0, -3.0], [3.0, 3.0])

    def test_projection_not_strictly_nonexpansive(self):
        v = check_strictly_nonexpansive(lambda x: np.clip(x, -1, 1), self.region, 500)
        assert v.refuted

    def test_contraction_certified(self):
        assert check_strictly_nonexpansive(lambda x: 0.5 * x, self.region, 500).certified

    def test_constant_not_injective(self):
        assert check_injective_map(lambda x: np.zeros(2), self.region, 50).refuted

    def test_rotation_not_strictly_monotone(self):
        assert check_strictly_monotone_map(lambda x: SKEW @ x, self.region, 50).refuted

    def test_inverse_single_valued(self):
        assert check_inverse_single_valued(lambda v: [v], np.eye(2)).certified
        assert check_inverse_single_valued(lambda v: [np.zeros(2), np.ones(2)], np.eye(2)).refuted


class TestParaSuite:
    # expected status of the six conditions, as observed and checked by hand
    EXPECTED = {
        "identity_op": "CCCCCC",
        "pd_linear_op": "CCCCCC",
        "abs_subdiff_op": "RRRRRR",
        "piecewise_nonmaximal": "RCRRRR",
        "skew_operator2d": "RRCCCC",
    }

    @pytest.mark.parametrize("name", sorted(EXPECTED))
    def test_statuses(self, name):
        rep = para_equivalence_suite(get_fixture(name).function, n_pairs=300)
        got = "".join(c["status"][0] for c in rep["conditions"])
        assert got == self.EXPECTED[name]
        assert rep["coherent"]

    def test_every_operator_fixture_listed(self):
        assert {f.name for f in operator_fixtures()} == set(self.EXPECTED)

    def test_piecewise_components(self):
        fx = get_fixture("piecewise_nonmaximal").function
        for lo, hi in ((-3.0, 0.0), (1.0, 4.0)):
            mask = (fx.graph.X[:, 0] >= lo) & (fx.graph.X[:, 0] <= hi)
            sub = FiniteOperatorGraph(1, fx.graph.X[mask], fx.graph.V[mask])
            assert check_almost_strictly_monotone(sub, fx.oracle).status is Status.CERTIFIED
