import json
import math

import numpy as np
import pytest

from konvex.core import midpoint_convexity_check
from konvex.errors import BadExponent, PathLeavesDomain
from konvex.gallery import (all_fixtures, function_fixtures, gallery_index_json, geometric_path, get_fixture,
                            gradient_blowup_probe, lp_sum_truncated, random_pl, sample_tilts)

from oracles import central_difference

FUNCTION_NAMES = [f.name for f in function_fixtures()]


@pytest.mark.parametrize("name", FUNCTION_NAMES)
def test_midpoint_convex(name):
    fx = get_fixture(name)
    assert midpoint_convexity_check(fx.blackbox(), 500, seed=2, region=fx.domain_region).certified


@pytest.mark.parametrize("name", FUNCTION_NAMES)
def test_truth_labels_valid(name):
    for value in get_fixture(name).truth.values():
        assert value in (True, False, "REGION-QUALIFIED", "APPROXIMATE")


class TestRockafellar:
    fx = get_fixture("rockafellar2d")

    def test_gradient_matches_central_differences(self):
        bb = self.fx.blackbox()
        X = self.fx.subdiff_region.sample(np.random.default_rng(0), 100)
        h = 1e-5
        for x in X:
            fd = [central_difference(lambda t: bb(x + t * e), 0.0, h) for e in np.eye(2)]
            err = np.abs(np.asarray(bb.grad(x)) - fd) / max(1.0, np.abs(fd).max())
            assert err.max() <= 1e-5

    def test_zero_on_ray(self):
        bb = self.fx.blackbox()
        for x1 in np.random.default_rng(1).uniform(0, 10, 100):
            assert bb(np.array([x1, 0.0])) == 0.0

    def test_outside_domain(self):
        bb = self.fx.blackbox()
        assert math.isinf(bb(np.array([-1.0, 1.0]))) and math.isinf(bb(np.array([0.0, 1.0])))
        assert bb.subgradients(np.array([1.0, 0.0])) == []

    def test_gradient_blowup_towards_boundary(self):
        path = geometric_path([1.0, 1.0], [0.0, 1.0], n=10)
        assert gradient_blowup_probe(self.fx, path).certified

    def test_probe_rejects_path_outside_domain(self):
        with pytest.raises(PathLeavesDomain):
            gradient_blowup_probe(self.fx, [[1.0, 1.0], [-1.0, 1.0]])


def test_blowup_refuted_for_quadratic():
    v = gradient_blowup_probe(get_fixture("quadratic"), geometric_path([1.0], [5.0], n=8))
    assert v.refuted and v.witness["kind"] == "BOUNDED_GRADIENT"


def test_blowup_neg_sqrt():
    assert gradient_blowup_probe(get_fixture("neg_sqrt"), geometric_path([1.0], [0.0], n=10)).certified


class TestLpSum:
    def test_fenchel_young_equality(self):
        fx = lp_sum_truncated(2, (2, 4))
        bb, conj = fx.blackbox(), fx.extra["conjugate"]
        for x in np.random.default_rng(3).uniform(-2, 2, (200, 2)):
            v = np.asarray(bb.grad(x))
            assert abs(bb(x) + conj(v) - x @ v) <= 1e-8
            # and the inequality at a perturbed dual point
            assert bb(x) + conj(v + 0.1) - x @ (v + 0.1) >= -1e-12

    def test_conjugate_exponents(self):
        assert get_fixture("lp:2,4").extra["conjugate_exponents"] == [2, pytest.approx(4 / 3)]

    @pytest.mark.parametrize("p", [(2, 1), (2, math.inf), (1.5,)])
    def test_bad_exponent(self, p):
        with pytest.raises(BadExponent):
            lp_sum_truncated(len(p), p)


def test_cantor_iterate_is_strictly_increasing():
    g = get_fixture("cantor8").function
    V = np.array([[float(a), float(b)] for a, b in g.vertices])
    assert np.all(np.diff(V[:, 0]) > 0) and np.all(np.diff(V[:, 1]) > 0)
    assert V[0].tolist() == [0.0, 0.0] and V[-1].tolist() == [1.0, 1.0]
    slopes = np.diff(V[:, 1]) / np.diff(V[:, 0])
    # slopes span many orders of magnitude but never vanish
    assert slopes.min() > 0 and slopes.max() / slopes.min() > 1e3


def test_registry():
    names = [f.name for f in all_fixtures()]
    assert len(names) == len(set(names))
    with pytest.raises(KeyError):
        get_fixture("no-such-fixture")
    index = json.loads(gallery_index_json())
    assert {e["name"] for e in index} >= set(names)


def test_sample_tilts_inside_conjugate_domain():
    T = sample_tilts(get_fixture("rockafellar2d"), 50)
    assert np.all(T[:, 0] < 0) and np.all(T[:, 1] < np.sqrt(-2 * T[:, 0]))
    assert np.all(sample_tilts(get_fixture("pl:abs"))[0] == 0)


def test_random_pl_deterministic():
    a = random_pl(np.random.default_rng(4))
    b = random_pl(np.random.default_rng(4))
    assert a == b
