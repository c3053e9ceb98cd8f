"""Closed-form fixtures with known convexity properties.

Every fixture carries ``truth`` labels with values ``True``, ``False``,
``"REGION-QUALIFIED"`` (holds on the recorded region only) or
``"APPROXIMATE"`` (finite approximation of an infinite construction), and a
short note saying where the labels come from.  Fixtures are addressable by
name through :func:`get_fixture`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from .certify.convexity import pl_as_blackbox
from .core.blackbox import BlackBoxConvex, Box, Mapped, Region, Union, make_rng
from .core.pl import MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE, PLConvex1D
from .core.polyline import VERTICAL, MonotonePolyline
from .core.tolerance import DEFAULT_TOL, Status, Tolerance, Verdict
from .errors import BadExponent, PathLeavesDomain
from .monotone import OperatorFixture, OperatorOracle, resolvent_linear2d

REGION_QUALIFIED = "REGION-QUALIFIED"
APPROXIMATE = "APPROXIMATE"


@dataclass(eq=False)
class Fixture:
    """A named test object with declared properties.

    ``kind`` is ``"pl"``, ``"blackbox"``, ``"operator"`` or ``"polyline"``.
    Regions are sampling hints: ``domain_region`` inside ``dom f``,
    ``subdiff_region`` inside ``dom ∂f`` and ``envelope_region`` where
    envelopes and proximal points are probed.
    """

    name: str
    kind: str
    function: object
    truth: dict
    provenance: str
    domain_region: Optional[Region] = None
    subdiff_region: Optional[Region] = None
    envelope_region: Optional[Region] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "pl":
            bb = self.blackbox()
            self.domain_region = self.domain_region or bb.domain
            self.subdiff_region = self.subdiff_region or bb.subdiff_domain
            self.envelope_region = self.envelope_region or Box(bb.domain.lo - 5, bb.domain.hi + 5)

    @cached_property
    def _bb(self):
        if self.kind == "pl":
            return pl_as_blackbox(self.function, self.name)
        if self.kind == "blackbox":
            return self.function
        raise TypeError(f"fixture {self.name!r} of kind {self.kind!r} is not a function")

    def blackbox(self) -> BlackBoxConvex:
        return self._bb

    @property
    def is_function(self) -> bool:
        return self.kind in ("pl", "blackbox")

    def index_entry(self) -> dict:
        return {"name": self.name, "kind": self.kind, "truth": dict(self.truth), "provenance": self.provenance}


def _stack(*cols):
    return np.stack(cols, axis=-1)


def _hess2(a, b, c):
    """Symmetric 2x2 matrices ``[[a, b], [b, c]]`` with broadcasting."""
    return np.stack([np.stack([a, b], axis=-1), np.stack([b, c], axis=-1)], axis=-2)


def _interior_subgrad(grad, inside):
    def subgrad(x):
        return [grad(x)] if inside(x) else []
    return subgrad


# -- two-dimensional functions ---------------------------------------------------


def _rock_f(X):
    X = np.asarray(X, dtype=float)
    x1, x2 = X[..., 0], X[..., 1]
    out = np.full(x1.shape, np.inf)
    pos = (x1 > 0) & (x2 >= 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = x2 ** 2 / (2 * x1) - 2 * np.sqrt(np.maximum(x2, 0.0))
    out = np.where(pos, val, out)
    return np.where((x1 == 0) & (x2 == 0), 0.0, out)


def _rock_grad(X):
    X = np.asarray(X, dtype=float)
    x1, x2 = X[..., 0], X[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        return _stack(-x2 ** 2 / (2 * x1 ** 2), x2 / x1 - 1 / np.sqrt(x2))


def _rock_hess(X):
    X = np.asarray(X, dtype=float)
    x1, x2 = X[..., 0], X[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        return _hess2(x2 ** 2 / x1 ** 3, -x2 / x1 ** 2, 1 / x1 + 0.5 * x2 ** -1.5)


def _positive_quadrant(x):
    return bool(x[0] > 0 and x[1] > 0)


ROCK_SUBDIFF = Box([0.01, 0.01], [10.0, 10.0])
# dom f sample including the boundary ray {x2 = 0}: the second coordinate snaps to 0 half the time
ROCK_DOMAIN = Box([1e-3, 0.0], [10.0, 10.0], boundary_weight=[0.0, 0.5])


def rockafellar2d() -> Fixture:
    """``x2^2/(2 x1) - 2 sqrt(x2)`` on ``x1 > 0, x2 >= 0``, ``0`` at the origin, ``+inf`` elsewhere.

    Strictly convex on the open quadrant, identically zero on the ray
    ``{(x1, 0) : x1 >= 0}``, with ``dom ∂f`` equal to the open quadrant.
    """
    f = BlackBoxConvex(2, _rock_f, grad=_rock_grad, subgrad=_interior_subgrad(_rock_grad, _positive_quadrant),
                       hess=_rock_hess, domain=ROCK_DOMAIN, subdiff_domain=ROCK_SUBDIFF, vectorized=True,
                       name="rockafellar2d")
    truth = {"convex": True, "strictly_convex": False, "almost_strictly_convex": True,
             "almost_differentiable": True, "subdiff_strictly_monotone": True}
    return Fixture("rockafellar2d", "blackbox", f, truth,
                   "Rockafellar's example: almost strictly convex but affine (zero) on a boundary ray",
                   ROCK_DOMAIN, ROCK_SUBDIFF, Box([-2.0, -2.0], [6.0, 6.0]),
                   extra={"interior_sampler": ROCK_SUBDIFF})


def sqnorm2d() -> Fixture:
    f = BlackBoxConvex(2, lambda X: np.sum(np.asarray(X) ** 2, axis=-1), grad=lambda X: 2 * np.asarray(X),
                       hess=lambda X: 2 * np.broadcast_to(np.eye(2), np.shape(X)[:-1] + (2, 2)),
                       domain=Box([-5, -5], [5, 5]), subdiff_domain=Box([-5, -5], [5, 5]), vectorized=True,
                       name="sqnorm2d")
    truth = {"convex": True, "strictly_convex": True, "almost_strictly_convex": True, "almost_differentiable": True}
    return Fixture("sqnorm2d", "blackbox", f, truth, "constructed: |x|^2, Hessian 2 Id",
                   f.domain, f.subdiff_domain, Box([-5, -5], [5, 5]))


RANK_ONE_C = np.array([1.0, 2.0])


def rank_one2d(c=RANK_ONE_C) -> Fixture:
    """``<c, x>^2``: convex, flat along ``c^⊥``."""
    c = np.asarray(c, dtype=float)
    f = BlackBoxConvex(2, lambda X: (np.asarray(X) @ c) ** 2,
                       grad=lambda X: 2 * (np.asarray(X) @ c)[..., None] * c,
                       hess=lambda X: 2 * np.broadcast_to(np.outer(c, c), np.shape(X)[:-1] + (2, 2)),
                       domain=Box([-5, -5], [5, 5]), subdiff_domain=Box([-5, -5], [5, 5]), vectorized=True,
                       name="rank_one2d")
    truth = {"convex": True, "strictly_convex": False, "almost_strictly_convex": False,
             "almost_differentiable": True}
    return Fixture("rank_one2d", "blackbox", f, truth,
                   "constructed: Hessian 2 c c^T vanishes along directions orthogonal to c",
                   f.domain, f.subdiff_domain, Box([-5, -5], [5, 5]), extra={"c": c.tolist()})


def sum_fixture(a: Fixture, b: Fixture) -> Fixture:
    """``f_a + f_b`` for two smooth black-box fixtures on R^2."""
    fa, fb = a.blackbox(), b.blackbox()

    def func(X):
        return fa.func(X) + fb.func(X)

    def grad(X):
        return fa.grad(X) + fb.grad(X)

    def hess(X):
        return fa.hess(X) + fb.hess(X)

    inside = (lambda x: bool(fa.subgradients(x)) and bool(fb.subgradients(x)))
    f = BlackBoxConvex(2, func, grad=grad, subgrad=_interior_subgrad(grad, inside), hess=hess,
                       domain=a.domain_region, subdiff_domain=a.subdiff_region, vectorized=True,
                       name=f"sum:{a.name}+{b.name}")
    both = a.truth.get("almost_strictly_convex") is True and b.truth.get("convex") is True
    truth = {"convex": True, "almost_strictly_convex": True if both else REGION_QUALIFIED}
    return Fixture(f.name, "blackbox", f, truth,
                   "sum of an almost strictly convex and a convex function with overlapping domains",
                   a.domain_region, a.subdiff_region, a.envelope_region)


SHEAR = np.array([[1.0, 1.0], [0.0, 1.0]])


def composition_fixture(a: Fixture, A=SHEAR, label: str = "shear") -> Fixture:
    """``f_a(A x)`` for an injective 2x2 matrix ``A``."""
    A = np.asarray(A, dtype=float)
    if abs(np.linalg.det(A)) < 1e-12:
        raise ValueError("composition needs an injective (invertible) matrix")
    Ainv = np.linalg.inv(A)
    fa = a.blackbox()

    def func(X):
        return fa.func(np.asarray(X) @ A.T)

    def grad(X):
        return fa.grad(np.asarray(X) @ A.T) @ A

    def hess(X):
        return A.T @ fa.hess(np.asarray(X) @ A.T) @ A

    inside = (lambda x: bool(fa.subgradients(A @ x)))
    sub = Mapped(a.subdiff_region, Ainv)
    dom = Mapped(a.domain_region, Ainv)
    f = BlackBoxConvex(2, func, grad=grad, subgrad=_interior_subgrad(grad, inside), hess=hess,
                       domain=dom, subdiff_domain=sub, vectorized=True, name=f"comp:{a.name}@{label}")
    truth = {"convex": True, "almost_strictly_convex": a.truth.get("almost_strictly_convex"),
             "strictly_convex": a.truth.get("strictly_convex")}
    return Fixture(f.name, "blackbox", f, truth, "composition with an injective linear map",
                   dom, sub, a.envelope_region, extra={"matrix": A.tolist()})


# -- one-dimensional smooth functions ---------------------------------------------


def _bb1(name, func, grad, hess, lo, hi, sub_lo=None, sub_hi=None):
    dom = Box([lo], [hi])
    sub = Box([lo if sub_lo is None else sub_lo], [hi if sub_hi is None else sub_hi])
    return BlackBoxConvex(1, lambda X: func(np.asarray(X, dtype=float)[..., 0]),
                          grad=lambda X: grad(np.asarray(X, dtype=float)[..., 0])[..., None],
                          hess=lambda X: hess(np.asarray(X, dtype=float)[..., 0])[..., None, None],
                          domain=dom, subdiff_domain=sub, vectorized=True, name=name)


def quadratic() -> Fixture:
    f = _bb1("quadratic", lambda x: x * x / 2, lambda x: x, lambda x: np.ones_like(x), -5.0, 5.0)
    truth = {"convex": True, "strictly_convex": True, "almost_strictly_convex": True, "almost_differentiable": True}
    return Fixture("quadratic", "blackbox", f, truth, "constructed: x^2/2, prox x/(1+lambda)",
                   f.domain, f.subdiff_domain, Box([-8.0], [8.0]))


def quartic() -> Fixture:
    f = _bb1("quartic", lambda x: x ** 4, lambda x: 4 * x ** 3, lambda x: 12 * x ** 2, -1.0, 1.0)
    truth = {"convex": True, "strictly_convex": True, "almost_strictly_convex": True, "almost_differentiable": True}
    return Fixture("quartic", "blackbox", f, truth, "constructed: x^4, second derivative vanishes only at 0",
                   f.domain, f.subdiff_domain, Box([-3.0], [3.0]), extra={"fpp": lambda x: 12 * np.asarray(x) ** 2})


def _neg_sqrt_f(x):
    with np.errstate(invalid="ignore"):
        return np.where(x >= 0, -np.sqrt(np.maximum(x, 0.0)), np.inf)


def neg_sqrt() -> Fixture:
    with np.errstate(divide="ignore"):
        f = _bb1("neg_sqrt", _neg_sqrt_f, lambda x: -0.5 / np.sqrt(x), lambda x: 0.25 * x ** -1.5,
                 0.0, 10.0, sub_lo=1e-3)
    f.subgrad = _interior_subgrad(f.grad, lambda x: bool(x[0] > 0))
    truth = {"convex": True, "strictly_convex": True, "almost_strictly_convex": True, "almost_differentiable": True}
    return Fixture("neg_sqrt", "blackbox", f, truth,
                   "constructed: -sqrt(x) on [0, inf); derivative blows up at the boundary point 0",
                   f.domain, f.subdiff_domain, Box([-4.0], [6.0]))


def huber() -> Fixture:
    def func(x):
        return np.where(np.abs(x) <= 1, x * x / 2, np.abs(x) - 0.5)

    f = _bb1("huber", func, lambda x: np.clip(x, -1.0, 1.0), lambda x: (np.abs(x) < 1).astype(float), -4.0, 4.0)
    truth = {"convex": True, "strictly_convex": False, "almost_strictly_convex": False,
             "almost_differentiable": True}
    # the envelope of parameter lam is quadratic on [-1 - lam, 1 + lam]; the region must reach the tails
    return Fixture("huber", "blackbox", f, truth, "constructed: quadratic core on [-1, 1], affine tails",
                   f.domain, f.subdiff_domain, Box([-40.0], [40.0]),
                   extra={"fpp": lambda x: (np.abs(np.asarray(x)) < 1).astype(float)})


def lp_sum_truncated(d: int, p) -> Fixture:
    """``sum_i |x_i|^{p_i} / p_i`` on R^d with every ``p_i >= 2``.

    ``extra["conjugate_exponents"]`` holds ``q_i = p_i / (p_i - 1)`` and
    ``extra["conjugate"]`` evaluates ``sum_i |v_i|^{q_i} / q_i``.

    Raises
    ------
    BadExponent
        If ``d < 1``, ``len(p) != d`` or some ``p_i < 2``.
    """
    p = list(p)
    if int(d) < 1 or len(p) != int(d):
        raise BadExponent(f"need d >= 1 exponents, got d={d} and p={p}")
    if any(not (pi >= 2 and math.isfinite(pi)) for pi in p):
        raise BadExponent(f"every exponent must be finite and >= 2, got {p}")
    d = int(d)
    P = np.asarray(p, dtype=float)
    q = [Fraction(pi, pi - 1) if isinstance(pi, int) else pi / (pi - 1) for pi in p]
    Q = np.asarray([float(qi) for qi in q])

    def func(X):
        return np.sum(np.abs(X) ** P / P, axis=-1)

    def grad(X):
        X = np.asarray(X, dtype=float)
        return np.sign(X) * np.abs(X) ** (P - 1)

    def hess(X):
        X = np.asarray(X, dtype=float)
        diag = (P - 1) * np.abs(X) ** (P - 2)
        return diag[..., :, None] * np.eye(d)

    def conjugate(V):
        return np.sum(np.abs(np.asarray(V, dtype=float)) ** Q / Q, axis=-1)

    name = "lp:" + ",".join(f"{pi:g}" for pi in p)
    box = Box(-2 * np.ones(d), 2 * np.ones(d))
    f = BlackBoxConvex(d, func, grad=grad, hess=hess, domain=box, subdiff_domain=box, vectorized=True, name=name)
    truth = {"convex": True, "strictly_convex": True, "almost_strictly_convex": True, "differentiable": True,
             "almost_differentiable": True,
             "conjugate_int_dom_empty": REGION_QUALIFIED}
    return Fixture(name, "blackbox", f, truth,
                   "finite truncation of a weighted l^p sum; the empty interior of dom f* in infinite "
                   "dimension is not reproduced",
                   box, box, Box(-3 * np.ones(d), 3 * np.ones(d)),
                   extra={"exponents": p, "conjugate_exponents": q, "conjugate": conjugate})


# -- piecewise-linear fixtures ----------------------------------------------------

M, P = MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE


def _pl_fixture(name, f, truth, note):
    base = {"convex": True}
    base.update(truth)
    return Fixture(name, "pl", f, base, note)


def standard_pl_set() -> list:
    """abs, indicator of [0, 1], hinge, affine ``3x + 1`` and a two-piece function (slopes 1 and 2)."""
    no = {"strictly_convex": False, "almost_strictly_convex": False}
    return [
        _pl_fixture("pl:abs", PLConvex1D((0,), (0,), -1, 1), {**no, "almost_differentiable": False},
                    "constructed: |x|, affine on each half-line"),
        _pl_fixture("pl:indicator01", PLConvex1D((0, 1), (0, 0), M, P), {**no, "almost_differentiable": False},
                    "constructed: indicator of [0, 1]; prox is the clamp to [0, 1]"),
        _pl_fixture("pl:hinge", PLConvex1D((0,), (0,), 0, 1), {**no, "almost_differentiable": False},
                    "constructed: max(0, x)"),
        _pl_fixture("pl:affine", PLConvex1D((0,), (1,), 3, 3), {**no, "almost_differentiable": True,
                                                                "subdiff_strictly_monotone": False},
                    "constructed: 3x + 1, subdifferential constantly {3}"),
        _pl_fixture("pl:twopiece", PLConvex1D((0,), (0,), 1, 2), {**no, "almost_differentiable": False},
                    "constructed: max(x, 2x)"),
    ]


def point_indicator() -> Fixture:
    return _pl_fixture("pl:point", PLConvex1D((0,), (0,), M, P),
                       {"strictly_convex": True, "almost_strictly_convex": True, "almost_differentiable": False},
                       "constructed: indicator of {0}; strict convexity holds vacuously")


# -- operators --------------------------------------------------------------------


def _linear_operator_fixture(name, A, graph_box, truth, note, ran_box=None, n_graph=40):
    A = np.asarray(A, dtype=float)
    oracle = OperatorOracle(2, lambda x: [A @ x], metadata=dict(truth), name=name)
    graph = oracle.graph(graph_box.sample(make_rng(0, 11), n_graph))
    J = resolvent_linear2d(A)
    Ainv = np.linalg.inv(A) if abs(np.linalg.det(A)) > 1e-12 else None
    g = np.linspace(-2, 2, 5)
    ran = np.array([[a, b] for a in g for b in g])

    def inverse(v):
        return [Ainv @ v] if Ainv is not None else []

    fx = OperatorFixture(name, oracle, graph, lambda x: J @ np.asarray(x, dtype=float), inverse,
                         Box([-3, -3], [3, 3]), ran, truth, note)
    return Fixture(name, "operator", fx, truth, note, extra={"matrix": A.tolist(), "resolvent_matrix": J.tolist()})


SKEW = np.array([[0.0, -1.0], [1.0, 0.0]])


def skew_operator2d() -> Fixture:
    """Rotation by a right angle: maximally monotone, not paramonotone."""
    truth = {"paramonotone": False, "maximal": True, "strictly_monotone": False, "inverse_single_valued": True,
             "monotone": True}
    return _linear_operator_fixture("skew_operator2d", SKEW, Box([-2, -2], [2, 2]), truth,
                                    "skew linear operator (x1, x2) -> (-x2, x1)")


def pd_linear_op() -> Fixture:
    truth = {"paramonotone": True, "maximal": True, "strictly_monotone": True, "inverse_single_valued": True,
             "monotone": True}
    return _linear_operator_fixture("pd_linear_op", [[1.0, -1.0], [1.0, 1.0]], Box([-2, -2], [2, 2]), truth,
                                    "constructed: identity plus skew part, positive definite symmetric part")


def _piecewise_apply(x):
    x = float(x[0])
    if x <= 0:
        return [[-x * x]]
    if x < 1:
        return []
    return [[(x - 1) ** 2]]


def _piecewise_resolvent(y):
    y = float(np.asarray(y).reshape(-1)[0])
    if y <= 0:
        return [(1 - math.sqrt(1 - 4 * y)) / 2]
    if y >= 1:
        return [1 + (-1 + math.sqrt(4 * y - 3)) / 2]
    raise ValueError(f"{y} is outside ran(Id + A)")


def _piecewise_inverse(v):
    v = float(np.asarray(v).reshape(-1)[0])
    out = []
    if v <= 0:
        out.append([-math.sqrt(-v)])
    if v >= 0:
        out.append([1 + math.sqrt(v)])
    return out


def piecewise_nonmaximal() -> Fixture:
    """``-x^2`` on ``x <= 0``, empty on ``]0, 1[``, ``(x - 1)^2`` on ``x >= 1``."""
    truth = {"paramonotone": True, "maximal": False, "strictly_monotone": False,
             "almost_strictly_monotone": True, "monotone": True}
    note = "paramonotone but not maximally monotone; strictly monotone on each component of its domain"
    oracle = OperatorOracle(1, _piecewise_apply, metadata=dict(truth), name="piecewise_nonmaximal")
    comps = Union([Box([-3.0], [0.0], boundary_weight=0.3), Box([1.0], [4.0], boundary_weight=0.3)])
    pts = np.vstack([[[0.0], [1.0]], comps.sample(make_rng(0, 12), 40)])
    graph = oracle.graph(pts)
    fx = OperatorFixture("piecewise_nonmaximal", oracle, graph, _piecewise_resolvent, _piecewise_inverse,
                         comps, np.linspace(-4, 4, 41)[:, None], truth, note)
    return Fixture("piecewise_nonmaximal", "operator", fx, truth, note, extra={"components": comps.to_dict()})


def identity_op() -> Fixture:
    truth = {"paramonotone": True, "maximal": True, "strictly_monotone": True, "inverse_single_valued": True,
             "monotone": True}
    oracle = OperatorOracle(1, lambda x: [x], metadata=dict(truth), name="identity_op")
    graph = oracle.graph(np.linspace(-2, 2, 21)[:, None])
    fx = OperatorFixture("identity_op", oracle, graph, lambda x: np.asarray(x, dtype=float) / 2,
                         lambda v: [np.asarray(v, dtype=float)], Box([-3.0], [3.0]),
                         np.linspace(-2, 2, 21)[:, None], truth, "subdifferential of x^2/2")
    return Fixture("identity_op", "operator", fx, truth, "subdifferential of x^2/2")


def _abs_apply(x):
    x = float(x[0])
    if x < 0:
        return [[-1.0]]
    if x > 0:
        return [[1.0]]
    return [[-1.0], [0.0], [1.0]]


def _abs_inverse(v):
    v = float(np.asarray(v).reshape(-1)[0])
    if abs(v) < 1:
        return [[0.0]]
    if v == 1:
        return [[0.0], [1.0], [2.0]]
    if v == -1:
        return [[0.0], [-1.0], [-2.0]]
    return []


def abs_subdiff_op() -> Fixture:
    truth = {"paramonotone": True, "maximal": True, "strictly_monotone": False, "inverse_single_valued": False,
             "monotone": True}
    oracle = OperatorOracle(1, _abs_apply, metadata=dict(truth), name="abs_subdiff_op")
    graph = oracle.graph(np.linspace(-3, 3, 25)[:, None])

    def soft(x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * np.maximum(np.abs(x) - 1, 0.0)

    fx = OperatorFixture("abs_subdiff_op", oracle, graph, soft, _abs_inverse, Box([-4.0], [4.0]),
                         np.linspace(-1, 1, 21)[:, None], truth, "subdifferential of |x|")
    return Fixture("abs_subdiff_op", "operator", fx, truth, "subdifferential of |x|")


# -- singular-function approximation ------------------------------------------------


def singular_iterate(k: int = 8, weight: float = 0.25) -> MonotonePolyline:
    """Graph on [0, 1] of the k-th iterate of a strictly increasing singular function.

    Each dyadic interval passes the fraction ``weight`` of its increment to
    its left half and the rest to its right half; for ``weight != 1/2`` the
    limit is continuous, strictly increasing and has zero derivative almost
    everywhere.  The iterate is piecewise linear with positive slopes.
    """
    if not 0 < weight < 1:
        raise ValueError("weight must lie in (0, 1)")
    incr = np.array([1.0])
    for _ in range(k):
        incr = np.column_stack([weight * incr, (1 - weight) * incr]).ravel()
    xs = np.linspace(0.0, 1.0, 2 ** k + 1)
    ys = np.concatenate([[0.0], np.cumsum(incr)])
    ys[-1] = 1.0
    return MonotonePolyline(tuple(zip(xs.tolist(), ys.tolist())), VERTICAL, VERTICAL)


def cantor8() -> Fixture:
    g = singular_iterate(8)
    truth = {"strictly_convex": APPROXIMATE, "second_derivative_zero_ae": APPROXIMATE}
    return Fixture("cantor8", "polyline", g, truth,
                   "8th iterate of a strictly increasing singular function, read as the derivative of "
                   "f(x) = int_0^x h; finite iterates cannot exhibit a vanishing second derivative",
                   extra={"k": 8, "weight": 0.25})


# -- boundary blow-up probe ------------------------------------------------------------


def gradient_blowup_probe(f, path, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Check that ``|∇f|`` outgrows the schedule ``2^i g0 / 2`` along ``path``.

    ``g0`` is the gradient norm at the first path point (``1`` if that is
    zero).  CERTIFIED means the norms dominate the whole schedule, which is
    evidence of divergence; REFUTED gives the first index where they fall
    behind.

    Raises
    ------
    PathLeavesDomain
        If a path point is outside ``dom f`` or the gradient is not finite there.
    """
    bb = f.blackbox() if isinstance(f, Fixture) else f
    if bb.grad is None:
        raise ValueError("gradient oracle required")
    path = np.asarray(path, dtype=float).reshape(-1, bb.dim)
    norms = []
    for k, x in enumerate(path):
        if not math.isfinite(bb(x)):
            raise PathLeavesDomain(f"path point {k} = {x.tolist()} is outside dom f")
        g = np.asarray(bb.grad(x), dtype=float).reshape(bb.dim)
        if not np.all(np.isfinite(g)):
            raise PathLeavesDomain(f"gradient is not finite at path point {k} = {x.tolist()}")
        norms.append(float(np.linalg.norm(g)))
    g0 = norms[0] if norms[0] > 0 else 1.0
    thresholds = [2.0 ** i * g0 / 2 for i in range(len(norms))]
    for i, (n, t) in enumerate(zip(norms, thresholds)):
        if n <= t * (1 - tol.eq_rel):
            return Verdict(Status.REFUTED, {"kind": "BOUNDED_GRADIENT", "index": i, "point": path[i].tolist(),
                                            "norm": n, "threshold": t, "norms": norms},
                           samples_used=len(norms), margin=n - t)
    return Verdict(Status.CERTIFIED, samples_used=len(norms), margin=min(n - t for n, t in zip(norms, thresholds)),
                   details={"norms": norms, "thresholds": thresholds})


def geometric_path(start, target, n: int = 12, ratio: float = 0.25) -> np.ndarray:
    """``target + ratio^i (start - target)`` for ``i = 0 .. n-1``."""
    start, target = np.asarray(start, dtype=float), np.asarray(target, dtype=float)
    return np.array([target + ratio ** i * (start - target) for i in range(n)])


# -- tilts -----------------------------------------------------------------------------------


def sample_tilts(fixture: Fixture, n: int = 20, seed: int = 0) -> np.ndarray:
    """Tilts ``x*`` for which ``f - <x*, .>`` should attain its infimum.

    Rockafellar-type fixtures need ``x*`` in the interior of ``dom f*``
    (``x*_1 < 0`` and ``x*_2 < sqrt(-2 x*_1)``), mapped by ``A^T`` for a
    composition with ``A``; PL fixtures always include the zero tilt, where
    a flat bottom shows up.
    """
    rng = make_rng(seed, 8)
    dim = fixture.blackbox().dim
    if "rockafellar2d" in fixture.name:
        v1 = -rng.uniform(0.1, 2.0, n)
        v2 = rng.uniform(-2.0, 1.0, n) * np.sqrt(-2 * v1) - 0.2
        U = np.column_stack([v1, v2])
        return U @ np.asarray(fixture.extra["matrix"]) if "matrix" in fixture.extra else U
    T = 0.5 * rng.standard_normal((n, dim))
    if fixture.kind == "pl":
        T[0] = 0.0
    return T


# -- random PL functions -----------------------------------------------------------------


def random_pl(rng, max_breakpoints: int = 6, rational: bool = False, p_bounded: float = 0.25) -> PLConvex1D:
    """Random valid PL convex function with small dyadic data.

    Breakpoints are half-integers in [-5, 5], slopes integers in [-4, 4];
    each side of the domain is bounded with probability ``p_bounded``.  With
    ``rational=True`` all data are :class:`fractions.Fraction`.
    """
    k = int(rng.integers(1, max_breakpoints + 1))
    xs = sorted(Fraction(int(v), 2) for v in rng.choice(np.arange(-10, 11), k, replace=False))
    slopes = sorted(Fraction(int(s)) for s in rng.integers(-4, 5, k + 1))
    vals = [Fraction(int(rng.integers(-3, 4)))]
    for i in range(k - 1):
        vals.append(vals[-1] + slopes[i + 1] * (xs[i + 1] - xs[i]))
    left = M if rng.random() < p_bounded else slopes[0]
    right = P if rng.random() < p_bounded else slopes[-1]
    f = PLConvex1D(tuple(xs), tuple(vals), left, right)
    return f if rational else f.to_float()


# -- registry ----------------------------------------------------------------------------


def _builders():
    b = {
        "rockafellar2d": rockafellar2d,
        "sqnorm2d": sqnorm2d,
        "rank_one2d": rank_one2d,
        "quadratic": quadratic,
        "quartic": quartic,
        "neg_sqrt": neg_sqrt,
        "huber": huber,
        "lp:2": lambda: lp_sum_truncated(1, [2]),
        "lp:2,4": lambda: lp_sum_truncated(2, [2, 4]),
        "pl:point": point_indicator,
        "sum:rockafellar2d+rank_one2d": lambda: sum_fixture(rockafellar2d(), rank_one2d()),
        "comp:rockafellar2d@shear": lambda: composition_fixture(rockafellar2d()),
        "skew_operator2d": skew_operator2d,
        "piecewise_nonmaximal": piecewise_nonmaximal,
        "identity_op": identity_op,
        "abs_subdiff_op": abs_subdiff_op,
        "pd_linear_op": pd_linear_op,
        "cantor8": cantor8,
    }
    for fx in standard_pl_set():
        b[fx.name] = (lambda fx=fx: fx)
    return b


def fixture_names() -> list:
    return sorted(_builders())


def get_fixture(name: str) -> Fixture:
    """Fixture by name; ``lp:<p1>,<p2>,...`` builds any truncated l^p sum."""
    b = _builders()
    if name in b:
        return b[name]()
    if name.startswith("lp:"):
        p = [float(t) if "." in t else int(t) for t in name[3:].split(",")]
        return lp_sum_truncated(len(p), p)
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")


def all_fixtures() -> list:
    return [get_fixture(n) for n in fixture_names()]


def function_fixtures() -> list:
    return [fx for fx in all_fixtures() if fx.is_function]


def operator_fixtures() -> list:
    return [fx for fx in all_fixtures() if fx.kind == "operator"]


def gallery_index() -> list:
    from .core.serialize import to_jsonable

    return to_jsonable([fx.index_entry() for fx in all_fixtures()])


def gallery_index_json() -> str:
    return json.dumps(gallery_index(), sort_keys=True, indent=2)
