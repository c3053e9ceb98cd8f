"""Exact 1-D calculus: conjugate, Moreau envelope and proximal average of PL functions."""
import numpy as np

from konvex.calculus import (ProxAverageParams, conjugate_pl, moreau_envelope_pl_array, prox_pl_array,
                             proximal_average)
from konvex.core import MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE, PLConvex1D, pl_dumps

absval = PLConvex1D((0.0,), (0.0,), -1.0, 1.0)
box = PLConvex1D((-1.0, 1.0), (0.0, 0.0), MINUS_INFINITY_SLOPE, PLUS_INFINITY_SLOPE)

print("conjugate of |x|:", pl_dumps(conjugate_pl(absval)))

xs = np.linspace(-3, 3, 7)
print("x        ", xs)
print("prox |x| ", prox_pl_array(absval, 1.0, xs))          # soft thresholding
print("env  |x| ", moreau_envelope_pl_array(absval, 1.0, xs))  # Huber

# the envelope of the average is the average of the envelopes
lam, alpha = 1.0, 0.5
pa, bound = proximal_average(absval, box, ProxAverageParams(lam, alpha), slope_grid=xs / lam, return_bound=True)
lhs = moreau_envelope_pl_array(pa, lam, xs)
rhs = alpha * moreau_envelope_pl_array(absval, lam, xs) + (1 - alpha) * moreau_envelope_pl_array(box, lam, xs)
print("max envelope mismatch:", np.abs(lhs - rhs).max(), "chord bound:", bound)
