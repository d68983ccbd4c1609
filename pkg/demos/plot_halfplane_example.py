"""
Two hulls of the same two points
================================

Take p = (0, 1) and the pair q1 = (1, sqrt 2), q2 = (-1, sqrt 2) in the
upper half-plane. The geodesic between q1 and q2 is an arc of the circle
u^2 + v^2 = 3. Averaging the two points in the tangent plane at p and
mapping back with exp_p lands somewhere else. This script computes both
curves and draws them.
"""

import math
import sys

import numpy as np

from hadamard_convexity.convexity import PointCloud, convex_hull_approx, exp_interp_curve, hausdorff
from hadamard_convexity.halfplane import hp_geodesic_params, hp_log, hp_point

p = hp_point(0.0, 1.0)
q1 = hp_point(1.0, math.sqrt(2.0))
q2 = hp_point(-1.0, math.sqrt(2.0))

# log_p of both points: the components are +-alpha and alpha
eta1, eta2 = hp_log(p, q1), hp_log(p, q2)
print("log_p q1 =", eta1.components)
print("log_p q2 =", eta2.components)

# The geodesic q1 -> q2 lies on a semicircle centred on the boundary
print(hp_geodesic_params(q1, q2))

###############################################################################
# Closing the set {q1, q2} under geodesics gives just the arc. One closure
# step adds it and the next step adds nothing new.
S = PointCloud.from_points([q1, q2])
hull = convex_hull_approx(S, seg_samples=128)
print(f"hull: {len(hull.cloud)} points after {hull.iterations} iteration(s), converged={hull.converged}")

###############################################################################
# The tangent-space average: t -> exp_p((1 - t) log_p q1 + t log_p q2)
curve = exp_interp_curve(p, q1, q2, 128)
x = curve.coords[64, 1]
print(f"midpoint height x = {x:.10f}   sqrt(3) = {math.sqrt(3):.10f}")
print(f"Hausdorff distance between the two curves: {hausdorff(hull.cloud, curve):.7f}")

###############################################################################
# Plot both curves, if matplotlib is around
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

arc = hull.cloud.coords[np.argsort(hull.cloud.coords[:, 0])]
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot(arc[:, 0], arc[:, 1], label="geodesic hull (arc of u^2+v^2=3)")
ax.plot(curve.coords[:, 0], curve.coords[:, 1], "--", label="exp_p of tangent averages")
ax.plot(*p.coords, "ko")
ax.annotate("p", p.coords, textcoords="offset points", xytext=(5, -10))
ax.set_aspect("equal")
ax.set_xlabel("u")
ax.set_ylabel("v")
ax.legend(loc="lower center", fontsize=8)
fig.tight_layout()
fig.savefig("halfplane_example.png", dpi=120)
print("wrote halfplane_example.png")
