"""
Curvature from the length of small circles
==========================================

A geodesic circle of radius r has length 2 pi r on a flat surface and
2 pi sinh r on the half-plane. The gap, scaled by 3 / (pi r^3), estimates
the curvature. The estimate uses an inscribed polygon, so it carries an
error of order 1/n^2 in the number of vertices n; this script tabulates it.
"""

import math

from hadamard_convexity.core import point
from hadamard_convexity.halfplane import hp_point
from hadamard_convexity.probes import curvature_estimate

p = hp_point(2.0, 0.5)

print(" r      n      estimate      exact-circle value   (pi/n)^2")
for r in (0.01, 0.05, 0.1):
    exact = 3 * (2 * math.pi * r - 2 * math.pi * math.sinh(r)) / (math.pi * r**3)
    for n in (64, 256, 1024):
        k = curvature_estimate(p, r, n)
        print(f"{r:5.2f} {n:6d}  {k: .8f}   {exact: .8f}      {(math.pi / n) ** 2:.2e}")

###############################################################################
# On R^2 the estimator returns zero up to rounding
print("flat:", curvature_estimate(point("euclidean", (0.0, 0.0)), 0.01, 512))
