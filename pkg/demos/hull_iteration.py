"""
Filling a hyperbolic triangle by geodesic closure
=================================================

Start from three points, join every pair by a sampled geodesic, and repeat
on the enlarged set. The per-step growth and Hausdorff residuals show how
fast the closure settles. The last section draws the iterates.
"""

import sys

import numpy as np

from hadamard_convexity.convexity import PointCloud, convex_hull_approx

S = PointCloud("halfplane", [[-1.0, 1.0], [1.5, 0.8], [0.2, 3.0]])

result = convex_hull_approx(S, seg_samples=24, k_max=6, budget=3000, seed=0)
print(f"pitch {result.pitch:.4f}, tolerance {result.tol:.4f}")
for k, (size, res) in enumerate(zip(result.sizes[1:], result.residuals), start=1):
    print(f"S_{k}: {size:5d} points, Hausdorff step {res:.4f}")
print("converged:", result.converged)

###############################################################################
# The same input read as points of R^2: the closure fills the flat triangle.
flat = convex_hull_approx(PointCloud("euclidean", S.coords), seg_samples=24, k_max=6, budget=3000)
print(f"flat closure: {len(flat.cloud)} points, converged={flat.converged}")

###############################################################################
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

fig, axes = plt.subplots(1, 2, figsize=(8, 3.5), sharey=True)
for ax, res, title in [(axes[0], result, "half-plane"), (axes[1], flat, "R^2")]:
    ax.scatter(*res.cloud.coords.T, s=1)
    ax.scatter(*S.coords.T, c="k", s=15)
    ax.set_title(title)
    ax.set_aspect("equal")
fig.tight_layout()
fig.savefig("hull_iteration.png", dpi=120)
print("wrote hull_iteration.png")
