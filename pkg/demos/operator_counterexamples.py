"""The equivalence suite on the operator fixtures.

The six conditions agree for paramonotone maximal operators; the rotation
(not paramonotone) and the operator with a gap in its domain (not maximal)
each split them.
"""
from konvex.gallery import operator_fixtures
from konvex.monotone import PARA_CONDITIONS, para_equivalence_suite

print(f"{'fixture':<22}" + " ".join(f"{c[:10]:>10}" for c in PARA_CONDITIONS) + "  agree  expected")
for fx in operator_fixtures():
    rep = para_equivalence_suite(fx.function, n_pairs=500)
    cells = " ".join(f"{c['status'][:10]:>10}" for c in rep["conditions"])
    print(f"{fx.name:<22}{cells}  {str(rep['agreement']):<6} {rep['expected_agreement']}")
