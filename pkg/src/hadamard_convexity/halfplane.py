"""Poincare upper half-plane H = {(u, v) : v > 0} with metric delta_ij / v^2.

Closed forms are stated at the base point (0, 1). Any other base point
(u0, v0) is handled by conjugating with the isometry

    phi(u, v) = ((u - u0) / v0, v / v0),

which sends (u0, v0) to (0, 1) and whose differential divides tangent
components by v0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .core import (
    HALFPLANE,
    DomainError,
    GeometryError,
    ManifoldPoint,
    ModelOps,
    TangentVector,
    check_same_base,
    check_same_model,
    register_model,
)

BASE = (0.0, 1.0)


def _validate(coords):
    if coords.size != 2:
        raise DomainError(f"half-plane points have 2 coordinates, got {coords.size}")
    if not coords[1] > 0:
        raise DomainError(f"half-plane point needs v > 0, got v={coords[1]}")


def _sinhc(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 + x * x / 6.0, np.sinh(safe) / safe)


def _dist(a, b):
    # Same value as arccosh(1 + |a - b|^2 / (2 v1 v2)) via cosh d = 1 + 2 sinh^2(d/2);
    # the arcsinh form keeps full relative precision for nearby points.
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    chord = np.linalg.norm(b - a, axis=-1)
    return 2.0 * np.arcsinh(chord / (2.0 * np.sqrt(a[..., 1] * b[..., 1])))


def _dist_key(a, b):
    # |a - b|^2 / (v1 v2) = 4 sinh^2(d / 2)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    key = (b[..., 0] - a[..., 0]) ** 2
    dv = b[..., 1] - a[..., 1]
    dv *= dv
    key += dv
    key /= a[..., 1] * b[..., 1]
    return key


def _key_to_dist(key):
    return 2.0 * np.arcsinh(0.5 * np.sqrt(key))


def _exp_base_branches(alpha, beta):
    """Closed form of exp at (0, 1) along the carrier semicircle, alpha != 0.

    The carrier is centred at (beta/alpha, 0) with radius r; s is the
    arclength coordinate on it, measured from its apex.
    """
    c = beta / alpha
    r = np.hypot(1.0, c)
    length = np.hypot(alpha, beta)
    s = np.sign(alpha) * length - np.arcsinh(c)
    return c + r * np.tanh(s), r / np.cosh(s)


def _exp_base_rotation(alpha, beta):
    """exp at (0, 1) as the rotated vertical geodesic; valid for every (alpha, beta).

    The vertical geodesic t -> (0, e^t) rotated about (0, 1) gives
        u = a sinh L / D,  v = 1 / D,  D = cosh L - b sinh L,
    with (a, b) the unit direction and L the length. D is evaluated as
    ((1 + b) e^-L + (1 - b) e^L) / 2 with 1 -/+ b rewritten as
    a^2 / (1 +/- b) to avoid cancellation near the vertical.
    """
    length = np.hypot(alpha, beta)
    safe_len = np.where(length > 0, length, 1.0)
    a = alpha / safe_len
    b = beta / safe_len
    # 1 -/+ b = a^2 / (1 +/- b); written in unit components so subnormal
    # tangents do not underflow to 0 / 0
    with np.errstate(divide="ignore", invalid="ignore"):
        one_minus_b = np.where(beta > 0, a * a / (1.0 + b), 1.0 - b)
        one_plus_b = np.where(beta < 0, a * a / (1.0 - b), 1.0 + b)
    denom = 0.5 * (one_plus_b * np.exp(-length) + one_minus_b * np.exp(length))
    u = alpha * _sinhc(length) / denom
    v = 1.0 / denom
    zero = length == 0
    return np.where(zero, 0.0, u), np.where(zero, 1.0, v)


def _exp_base(w, tol: Tolerances = DEFAULT_TOL):
    w = np.asarray(w, dtype=float)
    alpha, beta = w[..., 0], w[..., 1]
    near = np.abs(alpha) <= tol.near_vertical * np.abs(beta)
    safe_alpha = np.where(near, 1.0, alpha)
    with np.errstate(over="ignore"):
        u_br, v_br = _exp_base_branches(safe_alpha, np.where(near, 0.0, beta))
        u_rot, v_rot = _exp_base_rotation(alpha, beta)
    u = np.where(near, u_rot, u_br)
    v = np.where(near, v_rot, v_br)
    vertical = alpha == 0
    u = np.where(vertical, 0.0, u)
    v = np.where(vertical, np.exp(beta), v)
    return np.stack([u, v], axis=-1)


def _log_base(q):
    """Inverse of exp at (0, 1).

    Along the carrier circle through (0, 1) and q = (u, v) (centre
    c = (u^2 + v^2 - 1) / (2u)), the initial direction is proportional to
    (u, (u^2 + v^2 - 1) / 2); scaling by L / (v sinh L) gives exactly
    log = (L / sinh L) * (u / v, (u^2 + v^2 - 1) / (2 v)), which also covers
    the vertical case u = 0 and q = (0, 1).
    """
    q = np.asarray(q, dtype=float)
    u, v = q[..., 0], q[..., 1]
    length = _dist(np.broadcast_to(BASE, q.shape), q)
    scale = 1.0 / _sinhc(length)
    return np.stack([scale * u / v, scale * (u * u + (v - 1.0) * (v + 1.0)) / (2.0 * v)], axis=-1)


def _normalize(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    v0 = p[..., 1:2]
    return np.concatenate([q[..., :1] - p[..., :1], q[..., 1:2]], axis=-1) / v0


def _exp(p, w):
    p = np.asarray(p, dtype=float)
    v0 = p[..., 1:2]
    e = _exp_base(np.asarray(w, dtype=float) / v0)
    return np.concatenate([p[..., :1] + v0 * e[..., :1], v0 * e[..., 1:2]], axis=-1)


def _log(p, q):
    p = np.asarray(p, dtype=float)
    return p[..., 1:2] * _log_base(_normalize(p, q))


def _metric_factor(p):
    p = np.asarray(p, dtype=float)
    return 1.0 / p[..., 1] ** 2


register_model(HALFPLANE, ModelOps(_validate, _dist, _exp, _log, _metric_factor, _dist_key, _key_to_dist))


# ---------------------------------------------------------------------------
# point-level API


def hp_point(u: float, v: float) -> ManifoldPoint:
    return ManifoldPoint(HALFPLANE, (u, v))


def base_point() -> ManifoldPoint:
    return hp_point(*BASE)


def _require_halfplane(*points):
    model = check_same_model(*points)
    if model != HALFPLANE:
        raise GeometryError(f"expected half-plane points, got {model!r}")


def hp_dist(p: ManifoldPoint, q: ManifoldPoint) -> float:
    _require_halfplane(p, q)
    return float(_dist(p.coords, q.coords))


def _base_components(w) -> np.ndarray:
    if isinstance(w, TangentVector):
        _require_halfplane(w.base)
        if tuple(w.base.coords) != BASE:
            raise GeometryError(f"hp_exp_base expects a vector at (0, 1), got base {w.base.coords}")
        return w.components
    comps = np.asarray(w, dtype=float).reshape(-1)
    if comps.size != 2:
        raise GeometryError(f"expected components (alpha, beta), got {comps}")
    if not np.all(np.isfinite(comps)):
        raise DomainError(f"non-finite tangent components {comps}")
    return comps


def hp_exp_base(w) -> ManifoldPoint:
    """exp_p(alpha, beta) at p = (0, 1); ``w`` is a pair or a TangentVector at (0, 1)."""
    return ManifoldPoint(HALFPLANE, _exp_base(_base_components(w)))


def hp_log_base(q: ManifoldPoint) -> TangentVector:
    _require_halfplane(q)
    return TangentVector(base_point(), _log_base(q.coords))


def hp_exp(p: ManifoldPoint, w: TangentVector) -> ManifoldPoint:
    _require_halfplane(p)
    check_same_base(p, w)
    return ManifoldPoint(HALFPLANE, _exp(p.coords, w.components))


def hp_log(p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
    _require_halfplane(p, q)
    return TangentVector(p, _log(p.coords, q.coords))


def translate_dilate(coords, shift: float, scale: float) -> np.ndarray:
    """The isometry (u, v) -> (scale * u + shift, scale * v), scale > 0."""
    if scale <= 0:
        raise GeometryError("dilation factor must be positive")
    coords = np.asarray(coords, dtype=float)
    return np.stack([scale * coords[..., 0] + shift, scale * coords[..., 1]], axis=-1)


@dataclass(frozen=True)
class GeodesicArcParams:
    """Carrier of a half-plane geodesic: a vertical line or a semicircle centred on v = 0."""

    kind: str  # "vertical" | "semicircle"
    center_u: Optional[float] = None
    radius: Optional[float] = None
    line_u: Optional[float] = None

    def residual(self, coords) -> np.ndarray:
        """Signed failure of the carrier equation at each point."""
        coords = np.asarray(coords, dtype=float)
        u, v = coords[..., 0], coords[..., 1]
        if self.kind == "vertical":
            return u - self.line_u
        return (u - self.center_u) ** 2 + v**2 - self.radius**2


def hp_geodesic_params(q1: ManifoldPoint, q2: ManifoldPoint, tol: Tolerances = DEFAULT_TOL) -> GeodesicArcParams:
    _require_halfplane(q1, q2)
    (u1, v1), (u2, v2) = q1.coords, q2.coords
    if u1 == u2 and v1 == v2:
        raise GeometryError("coincident points do not determine a carrier geodesic")
    if abs(u1 - u2) <= tol.vertical_carrier * (1.0 + abs(u1) + abs(u2)):
        return GeodesicArcParams("vertical", line_u=0.5 * (u1 + u2))
    center = (u2 * u2 + v2 * v2 - u1 * u1 - v1 * v1) / (2.0 * (u2 - u1))
    return GeodesicArcParams("semicircle", center_u=center, radius=float(np.hypot(u1 - center, v1)))
