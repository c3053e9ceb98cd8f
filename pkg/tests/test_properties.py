"""Property tests for the core and calculus invariants."""
from fractions import Fraction

import numpy as np
from hypothesis import assume, given, strategies as st

from konvex.calculus import conjugate_graph, conjugate_pl, moreau_envelope_pl, prox_pl
from konvex.core import (MINUS_INFINITY_SLOPE as M, PLUS_INFINITY, PLUS_INFINITY_SLOPE as P, BlackBoxConvex, Box,
                         PLConvex1D, canonicalize, ext_add, midpoint_convexity_check, pl_dumps, pl_eval, pl_loads,
                         pl_subdiff, pl_to_polyline, polyline_to_pl, recheck_chord_witness)

small = st.fractions(min_value=-6, max_value=6, max_denominator=8)


@st.composite
def pl_functions(draw, rational=True):
    xs = sorted(draw(st.sets(small, min_size=1, max_size=6)))
    slopes = sorted(draw(st.lists(small, min_size=len(xs) + 1, max_size=len(xs) + 1)))
    vals = [draw(small)]
    for i in range(len(xs) - 1):
        vals.append(vals[-1] + slopes[i + 1] * (xs[i + 1] - xs[i]))
    left = M if draw(st.booleans()) else slopes[0]
    right = P if draw(st.booleans()) else slopes[-1]
    f = PLConvex1D(tuple(xs), tuple(vals), left, right)
    return f if rational else f.to_float()


extreals = st.one_of(st.floats(-1e6, 1e6), st.just(PLUS_INFINITY))


@given(extreals, extreals, extreals)
def test_extreal_addition_commutative_associative(a, b, c):
    assert ext_add(a, b) == ext_add(b, a)
    if PLUS_INFINITY in (a, b, c):
        assert ext_add(ext_add(a, b), c) == ext_add(a, ext_add(b, c)) == PLUS_INFINITY


@given(pl_functions())
def test_polyline_round_trip_exact(f):
    x0 = f.breakpoints[0]
    g = polyline_to_pl(pl_to_polyline(f), x0, pl_eval(f, x0))
    for x in f.breakpoints:
        assert pl_eval(g, x) == pl_eval(f, x)


@given(pl_functions(), small, small)
def test_subdiff_monotone(f, x, y):
    assume(x < y)
    a, b = pl_subdiff(f, x), pl_subdiff(f, y)
    if not (a.is_empty or b.is_empty):
        assert a.hi <= b.lo


@given(pl_functions(), small, small)
def test_subgradient_inequality_exact(f, x, y):
    s = pl_subdiff(f, x)
    assume(not s.is_empty)
    fy, fx = pl_eval(f, y), pl_eval(f, x)
    for v in (s.lo, s.hi):
        if v in (float("inf"), float("-inf")):
            continue
        assert fy == PLUS_INFINITY or fy >= fx + v * (y - x)


@given(pl_functions())
def test_biconjugate_exact(f):
    assert conjugate_pl(conjugate_pl(f)).canonical() == f.canonical()


@given(pl_functions())
def test_graph_duality_exact(f):
    assert canonicalize(pl_to_polyline(conjugate_pl(f))) == canonicalize(conjugate_graph(pl_to_polyline(f)))


@given(pl_functions(), small)
def test_fenchel_young(f, v):
    fs = pl_eval(conjugate_pl(f), v)
    for x in f.breakpoints:
        assert fs == PLUS_INFINITY or pl_eval(f, x) + fs >= x * v


@given(pl_functions(rational=False))
def test_json_round_trip(f):
    assert pl_loads(pl_dumps(f)) == f


@given(pl_functions(rational=False), st.floats(0.1, 10), st.floats(-20, 20), st.floats(-20, 20))
def test_prox_firmly_nonexpansive(f, lam, x, y):
    p, q = float(prox_pl(f, lam, x)), float(prox_pl(f, lam, y))
    assert (p - q) ** 2 <= (p - q) * (x - y) + 1e-9 * (1 + abs(x) + abs(y))


@given(pl_functions(rational=False), st.floats(0.1, 10), st.floats(-20, 20))
def test_envelope_below_function(f, lam, x):
    assert float(moreau_envelope_pl(f, lam, x)) <= float(pl_eval(f, x)) + 1e-9 * (1 + abs(x))


@given(st.integers(0, 2**32 - 1))
def test_refutation_witness_reverifies(seed):
    f = BlackBoxConvex(2, lambda x: float(np.sin(3 * x[0]) + x[1] ** 2), domain=Box([-2, -2], [2, 2]))
    v = midpoint_convexity_check(f, 200, seed)
    if v.refuted:
        assert recheck_chord_witness(f, v.witness) < 0


@given(pl_functions(), st.integers(-12, 12))
def test_rational_evaluation_stays_rational(f, k):
    val = pl_eval(f, Fraction(k, 2))
    assert val == PLUS_INFINITY or isinstance(val, Fraction)
