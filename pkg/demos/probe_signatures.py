"""
Flat versus curved probe signatures
===================================

Five sampled defects, one per flatness property: affinity of the log
coordinates, exp-interpolation along geodesics, equality of the two hulls,
isometry of exp_p, and curvature. On R^n every defect is rounding noise;
on the half-plane each one is clearly positive.
"""

from hadamard_convexity import probes
from hadamard_convexity.core import point
from hadamard_convexity.halfplane import hp_point


def show(title, reports):
    print(title)
    for r in reports:
        print(f"  {r.clause:<22} {r.defect:10.3e}   {r.status()}")


###############################################################################
# Random configurations around a point of R^3
flat = probes.run_suite(point("euclidean", (0.5, -1.0, 2.0)), probes.SuiteConfig(seed=7))
show("R^3", flat)
print("  flat signature:", probes.flat_signature(flat))

###############################################################################
# The same probes around a point of the half-plane
curved = probes.run_suite(hp_point(0.3, 2.0), probes.SuiteConfig(seed=7))
show("half-plane", curved)
print("  hyperbolic signature:", probes.hyperbolic_signature(curved))

###############################################################################
# The exp map only ever stretches distances on the half-plane. The smallest
# signed gap dist(exp u, exp v) - |u - v| over 2000 random pairs stays >= 0.
rep = probes.exp_isometry_defect(hp_point(0.0, 1.0), n_pairs=2000, radius=3.0, seed=1)
print(f"largest stretch {rep.defect:.4f}, smallest signed gap {rep.details['min_signed']:.2e}")

###############################################################################
# The curvature estimate does not depend on where it is taken
for base in [(0, 1), (5, 0.01), (-40, 300)]:
    k = probes.curvature_estimate(hp_point(*base), r=0.01, n_circle=512)
    print(f"K at {base}: {k:.6f}")
