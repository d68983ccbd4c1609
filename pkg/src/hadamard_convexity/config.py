"""Numerical tolerances shared by every module.

The geometry is exact; every slack below is a floating-point allowance and
lives here so it can be audited in one place.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    roundtrip: float = 1e-9       # absolute, exp/log and endpoint checks
    comparison: float = 1e-12     # relative, metric identities
    weight_sum: float = 1e-12     # convex weights must sum to 1
    # hp_geodesic_params: vertical carrier when |u1 - u2| <= this * (1 + |u1| + |u2|)
    vertical_carrier: float = 1e-12
    # hp_exp_base switches away from the c = beta/alpha branch formula
    # when |alpha| <= this * |beta| (cancellation in c + r*tanh(s))
    near_vertical: float = 1e-4


DEFAULT_TOL = Tolerances()
