"""Almost strict but not strict: the Rockafellar function on the closed quadrant.

f(x1, x2) = x2^2 / (2 x1) - 2 sqrt(x2) for x1 > 0 and x2 >= 0, 0 at the
origin, +inf elsewhere.  Strict convexity fails on the ray x2 = 0 (where f
vanishes), while every segment inside dom ∂f (the open quadrant) is
strictly convex.
"""
import numpy as np

from konvex.certify import certify_almost_strict_convexity, certify_strict_convexity_sampled, theorem_almost_suite
from konvex.gallery import geometric_path, get_fixture, gradient_blowup_probe

fx = get_fixture("rockafellar2d")
f = fx.blackbox()

strict = certify_strict_convexity_sampled(f, fx.domain_region, n_triples=1000, seed=0)
print("strict convexity over dom f:", strict.label())
print("  witness segment:", strict.witness["x0"], "->", strict.witness["x1"])

almost = certify_almost_strict_convexity(f, fx.subdiff_region, n_segments=2000, seed=0)
print("almost strict convexity on dom ∂f:", almost.label(), f"(min margin {almost.margin:.3g})")

# |∇f| blows up approaching the boundary point (0, 1)
path = geometric_path([1.0, 1.0], [0.0, 1.0], n=10)
probe = gradient_blowup_probe(fx, path)
print("gradient blow-up towards (0, 1):", probe.label())
print("  norms:", np.round(probe.details["norms"], 1))

report = theorem_almost_suite(fx)
for c in report["conditions"]:
    print(f"  {c['name']:<42} {c['verdict']}")
print("suite agreement:", report["agreement"], "coherent:", report["coherent"])
