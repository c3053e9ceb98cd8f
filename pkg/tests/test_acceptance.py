"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line with the
measured quantities.  Run directly (``python3 tests/test_acceptance.py``) to
get only the twelve lines.
"""
import sys
from fractions import Fraction

import numpy as np

from konvex.calculus import (ProxAverageParams, conjugate_graph, conjugate_pl, envelope_gradient_pl_array,
                             moreau_envelope_pl_array, prox_kink_preimages, prox_pl, proximal_average)
from konvex.certify import (certify_almost_strict_convexity, certify_strict_convexity_sampled, envelope_blackbox,
                            envelope_suite, prox_blackbox, second_order_test_1d, second_order_test_nd,
                            theorem_almost_suite, unique_minimizer_check)
from konvex.cli import JobSpec, execute, report_body
from konvex.core import Status, canonicalize, make_rng, pl_eval, pl_to_polyline
from konvex.gallery import function_fixtures, get_fixture, operator_fixtures, random_pl, sample_tilts
from konvex.monotone import (FiniteOperatorGraph, check_almost_strictly_monotone, check_strictly_monotone,
                             check_strictly_nonexpansive, para_equivalence_suite, resolvent_linear2d)

from oracles import exact_chord_slack

# tolerances pinned from the acceptance criteria
BICONJ_TOL = 1e-9
MOREAU_TOL = 1e-9
FD_STEP = 1e-4
FD_TOL = 1e-6
KINK_EXCLUSION = 10 * FD_STEP
PROX_AVG_TOL = 1e-6
ROCK_MIN_MARGIN = 1e-9
ROCK_SEGMENTS = 2000
SKEW_TOL = 1e-12
SPREAD_TOL = 1e-6
SEED = 2024


def random_functions(n=200, rational=False, seed=SEED):
    rng = np.random.default_rng(seed)
    return [random_pl(rng, rational=rational) for _ in range(n)]


def criterion_1():
    worst = 0.0
    for f in random_functions():
        g = conjugate_pl(conjugate_pl(f))
        worst = max(worst, max(abs(float(pl_eval(g, x)) - float(pl_eval(f, x))) for x in f.breakpoints))
    rational_exact = all(conjugate_pl(conjugate_pl(f)).canonical() == f.canonical()
                         for f in random_functions(rational=True))
    return worst <= BICONJ_TOL and rational_exact, f"max |f** - f| = {worst:.3g}; rational exact: {rational_exact}"


def criterion_2():
    fs = random_functions()
    equal = sum(canonicalize(pl_to_polyline(conjugate_pl(f))) == canonicalize(conjugate_graph(pl_to_polyline(f)))
                for f in fs)
    return equal == len(fs), f"{equal}/{len(fs)} graphs identical after canonicalization"


def criterion_3():
    rng = np.random.default_rng(SEED + 3)
    fs = random_functions()
    worst = 0.0
    for _ in range(1000):
        f = fs[int(rng.integers(len(fs)))]
        lam, x = rng.uniform(0.1, 10), rng.uniform(-20, 20)
        err = abs(float(prox_pl(f, lam, x) + lam * prox_pl(conjugate_pl(f), 1 / lam, x / lam)) - x)
        worst = max(worst, err)
    return worst <= MOREAU_TOL, f"1000 triples, max error {worst:.3g}"


def _fd_error_pl(f, lam, rng):
    X = rng.uniform(-10, 10, 4000)
    kinks = np.array(prox_kink_preimages(f, lam))
    if kinks.size:
        X = X[np.min(np.abs(X[:, None] - kinks[None, :]), axis=1) > KINK_EXCLUSION]
    X = X[:500]
    g = envelope_gradient_pl_array(f, lam, X)
    h = FD_STEP
    fd = (moreau_envelope_pl_array(f, lam, X + h) - moreau_envelope_pl_array(f, lam, X - h)) / (2 * h)
    return len(X), float(np.abs(g - fd).max())


def _fd_error_blackbox(fx, lam):
    bb = fx.blackbox()
    X = fx.envelope_region.sample(make_rng(SEED), 500)
    g = (X - prox_blackbox(bb, X, lam)) / lam
    fd = np.empty_like(X)
    for i in range(bb.dim):
        e = np.zeros(bb.dim)
        e[i] = FD_STEP
        fd[:, i] = (envelope_blackbox(bb, X + e, lam)[0] - envelope_blackbox(bb, X - e, lam)[0]) / (2 * FD_STEP)
    return len(X), float(np.abs(g - fd).max())


def criterion_4():
    rng = np.random.default_rng(SEED + 4)
    worst, counts = 0.0, []
    for fx in function_fixtures():
        if fx.kind == "pl":
            n, err = _fd_error_pl(fx.function.to_float(), 1.0, rng)
        else:
            n, err = _fd_error_blackbox(fx, 1.0)
        counts.append(n)
        worst = max(worst, err)
    return worst <= FD_TOL and min(counts) == 500, \
        f"{len(counts)} fixtures x 500 points, max |grad - FD| = {worst:.3g}"


def criterion_5():
    rng = np.random.default_rng(SEED + 5)
    pairs = [(random_pl(rng), random_pl(rng)) for _ in range(20)]
    xs = np.linspace(-10, 10, 101)
    excess_p = excess_d = -np.inf
    raw = 0.0
    for f1, f2 in pairs:
        s1, s2 = conjugate_pl(f1), conjugate_pl(f2)
        for lam in (0.5, 1.0, 2.0):
            for alpha in (0.25, 0.5, 0.75):
                # dual parameter u = x / lam places a chord node at every envelope grid point
                pa, bound = proximal_average(f1, f2, ProxAverageParams(lam, alpha), slope_grid=xs / lam,
                                             return_bound=True)
                primal = np.abs(moreau_envelope_pl_array(pa, lam, xs)
                                - alpha * moreau_envelope_pl_array(f1, lam, xs)
                                - (1 - alpha) * moreau_envelope_pl_array(f2, lam, xs))
                vs = xs / lam
                dual = np.abs(moreau_envelope_pl_array(conjugate_pl(pa), 1 / lam, vs)
                              - alpha * moreau_envelope_pl_array(s1, 1 / lam, vs)
                              - (1 - alpha) * moreau_envelope_pl_array(s2, 1 / lam, vs))
                excess_p = max(excess_p, float(primal.max() - bound))
                excess_d = max(excess_d, float(dual.max() - bound))
                raw = max(raw, float(primal.max()), float(dual.max()))
    ok = excess_p <= PROX_AVG_TOL and excess_d <= PROX_AVG_TOL
    return ok, (f"180 settings x 101 points; max excess over chord bound primal {excess_p:.3g}, "
                f"dual {excess_d:.3g}; max raw error {raw:.3g}")


def criterion_6():
    fx = get_fixture("rockafellar2d")
    bb = fx.blackbox()
    v = certify_almost_strict_convexity(bb, fx.subdiff_region, ROCK_SEGMENTS, seed=0)
    ok_almost = v.label() == "CERTIFIED(sampled)" and v.margin > ROCK_MIN_MARGIN and v.samples_used >= ROCK_SEGMENTS
    ray = make_rng(SEED).uniform(0, 10, 100)
    ok_ray = all(bb(np.array([x1, 0.0])) == 0.0 for x1 in ray)
    rep = theorem_almost_suite(fx)
    ok_suite = rep["agreement"] and rep["coherent"]
    s = certify_strict_convexity_sampled(bb, fx.domain_region, 1000, seed=0)
    w = s.witness or {}
    ok_strict = (s.status is Status.REFUTED and w.get("kind") == "AFFINE_SEGMENT"
                 and w["x0"][1] == 0.0 and w["x1"][1] == 0.0)
    return ok_almost and ok_ray and ok_suite and ok_strict, (
        f"almost strict {v.label()} margin {v.margin:.3g} over {v.samples_used} segments; "
        f"f(x1,0)=0 on 100 points: {ok_ray}; suite agreement: {ok_suite}; "
        f"strict over domain {s.status.value} ({w.get('kind')} from {w.get('x0')} to {w.get('x1')})")


def criterion_7():
    fx = get_fixture("skew_operator2d")
    J = resolvent_linear2d(fx.extra["matrix"])
    err = float(np.abs(J - 0.5 * np.array([[1, 1], [-1, 1]])).max())
    ne = check_strictly_nonexpansive(lambda x: J @ x, fx.function.resolvent_region, 1000, seed=0)
    sm = check_strictly_monotone(fx.function.graph)
    ok = err <= SKEW_TOL and ne.status is Status.CERTIFIED and ne.samples_used == 1000 and sm.refuted
    return ok, (f"resolvent error {err:.3g}; strictly nonexpansive {ne.label()} on {ne.samples_used} pairs; "
                f"strictly monotone {sm.status.value}")


def criterion_8():
    op = get_fixture("piecewise_nonmaximal").function
    comps = []
    for lo, hi in ((-3.0, 0.0), (1.0, 4.0)):
        mask = (op.graph.X[:, 0] >= lo) & (op.graph.X[:, 0] <= hi)
        sub = FiniteOperatorGraph(1, op.graph.X[mask], op.graph.V[mask])
        comps.append(check_almost_strictly_monotone(sub, op.oracle))
    v = check_strictly_monotone(op.graph)
    w = v.witness or {}
    pair = sorted([(w.get("x0"), w.get("v0")), (w.get("x1"), w.get("v1"))])
    ok = (all(c.certified for c in comps) and v.refuted and pair == [([0.0], [0.0]), ([1.0], [0.0])]
          and w.get("inner_product") == 0.0)
    return ok, (f"components {[c.status.value for c in comps]}; global {v.status.value} with pair "
                f"{pair} and inner product {w.get('inner_product')!r}")


def _quartic(x):
    return x ** 4


def criterion_9():
    fx = get_fixture("quartic")
    so = second_order_test_1d(fx.extra["fpp"], -1.0, 1.0, n_grid=1025)
    rng = np.random.default_rng(SEED + 9)
    den = 2 ** 20
    xs = rng.integers(-den, den + 1, (10_000, 2))
    lams = rng.integers(1, den, 10_000)
    positive = 0
    for (a, b), lam in zip(xs, lams):
        if a == b:
            b = b + 1
        positive += exact_chord_slack(_quartic, Fraction(int(a), den), Fraction(int(b), den),
                                      Fraction(int(lam), den)) > 0
    sampled = certify_strict_convexity_sampled(fx.blackbox(), fx.domain_region, 10_000, seed=0)
    h = get_fixture("huber")
    hv = second_order_test_1d(h.extra["fpp"], float(h.domain_region.lo[0]), float(h.domain_region.hi[0]))
    lo, hi = (hv.witness or {}).get("x_interval", (0.0, 0.0))
    tail = hi <= -1.0 or lo >= 1.0
    r = get_fixture("rank_one2d")
    c = np.asarray(r.extra["c"], dtype=float)
    rv = second_order_test_nd(r.function.hess, np.zeros(2), np.array([c[1], -c[0]]))
    ok = (so.status is Status.CERTIFIED and positive == 10_000 and not sampled.refuted
          and hv.refuted and hv.witness["kind"] == "FLAT_PATCH" and tail and rv.refuted)
    return ok, (f"x^4 second-order {so.status.value} (n_grid 1025); exact chord slack > 0 on {positive}/10000 "
                f"triples (sampled certifier {sampled.status.value}); Huber {hv.status.value} flat patch on "
                f"[{lo:g}, {hi:g}]; rank-one perpendicular segment {rv.status.value}")


EXPECTED_PARA_DISAGREEMENT = {"skew_operator2d", "piecewise_nonmaximal"}


def criterion_10():
    unexpected, disagreements = [], set()
    for fx in function_fixtures():
        reps = [theorem_almost_suite(fx)] + [envelope_suite(fx, lam) for lam in (0.1, 1.0, 10.0)]
        unexpected += [(r["suite"], fx.name) for r in reps if not r["coherent"] or not r["agreement"]]
    for fx in operator_fixtures():
        r = para_equivalence_suite(fx.function)
        if not r["coherent"]:
            unexpected.append((r["suite"], fx.name))
        if not r["agreement"]:
            disagreements.add(fx.name)
    ok = not unexpected and disagreements == EXPECTED_PARA_DISAGREEMENT
    return ok, f"unexpected: {unexpected}; expected disagreements observed on {sorted(disagreements)}"


def criterion_11():
    out, ok = [], True
    for name in ("rockafellar2d", "lp:2,4"):
        fx = get_fixture(name)
        v = unique_minimizer_check(fx, sample_tilts(fx, 20), n_starts=16, spread_tol=SPREAD_TOL)
        spread = v.details.get("max_spread")
        ok &= v.certified and v.samples_used == 320 and spread is not None and spread <= SPREAD_TOL
        out.append(f"{name} {v.status.value} spread {spread:.3g}")
    ind = get_fixture("pl:indicator01")
    v = unique_minimizer_check(ind, sample_tilts(ind, 20), n_starts=16, spread_tol=SPREAD_TOL)
    ok &= v.refuted
    out.append(f"indicator01 {v.status.value}")
    return ok, "; ".join(out)


def criterion_12():
    jobs = [JobSpec("suite", "t-almost", fixtures=["all"], seed=11),
            *[JobSpec("suite", "t-envel", fixtures=[name], params={"lambda": 1.0}, seed=11)
              for name in ("rockafellar2d", "rank_one2d", "pl:abs")],
            JobSpec("suite", "t-para", fixtures=["all"], seed=11),
            JobSpec("check", "almost-strict-convex", fixtures=["rockafellar2d"], seed=11)]
    same = 0
    for job in jobs:
        a, _ = execute(job)
        b, _ = execute(JobSpec.from_dict(job.to_dict()))
        same += report_body(a).encode() == report_body(b).encode()
    return same == len(jobs), f"{same}/{len(jobs)} repeated runs byte-identical"


CRITERIA = {
    1: ("biconjugation involution", criterion_1),
    2: ("graph duality", criterion_2),
    3: ("Moreau decomposition", criterion_3),
    4: ("envelope gradient identity", criterion_4),
    5: ("proximal average identities", criterion_5),
    6: ("Rockafellar dichotomy", criterion_6),
    7: ("skew counterexample", criterion_7),
    8: ("non-maximal counterexample", criterion_8),
    9: ("second-order tests", criterion_9),
    10: ("suite coherence", criterion_10),
    11: ("unique minimizer", criterion_11),
    12: ("determinism", criterion_12),
}


def evaluate(n):
    name, fn = CRITERIA[n]
    try:
        ok, detail = fn()
    except Exception as exc:  # reported as a failing line, then re-raised by the test
        return False, f"{type(exc).__name__}: {exc}", exc
    return bool(ok), detail, None


def _check(n, capsys):
    ok, detail, exc = evaluate(n)
    with capsys.disabled():
        print(f"\nACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}: {CRITERIA[n][0]}: {detail}")
    if exc is not None:
        raise exc
    assert ok, detail


def test_criterion_01_biconjugation(capsys):
    _check(1, capsys)


def test_criterion_02_graph_duality(capsys):
    _check(2, capsys)


def test_criterion_03_moreau_decomposition(capsys):
    _check(3, capsys)


def test_criterion_04_envelope_gradient(capsys):
    _check(4, capsys)


def test_criterion_05_proximal_average(capsys):
    _check(5, capsys)


def test_criterion_06_rockafellar(capsys):
    _check(6, capsys)


def test_criterion_07_skew(capsys):
    _check(7, capsys)


def test_criterion_08_nonmaximal(capsys):
    _check(8, capsys)


def test_criterion_09_second_order(capsys):
    _check(9, capsys)


def test_criterion_10_suite_coherence(capsys):
    _check(10, capsys)


def test_criterion_11_unique_minimizer(capsys):
    _check(11, capsys)


def test_criterion_12_determinism(capsys):
    _check(12, capsys)


if __name__ == "__main__":
    failed = 0
    for n in CRITERIA:
        ok, detail, _ = evaluate(n)
        failed += not ok
        print(f"ACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}: {CRITERIA[n][0]}: {detail}")
    sys.exit(1 if failed else 0)
