"""Sampled defect functionals for the five equivalent flatness properties.

Each probe measures how badly one property fails on a given model:

    affinity             q -> g_p(log_p q, y) is affine along geodesics
    exp-interp-geodesic  exp_p((1-t) log_p q1 + t log_p q2) is the geodesic q1 -> q2
    hull-equality        convex hull == exp_p-image of convex combinations
    exp-isometry         exp_p : T_pM -> M preserves distances
    curvature            sectional curvature vanishes

Every defect is a max over samples, so any positive value is a concrete
counterexample, while a zero only says the samples found none.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import convexity
from .core import (
    GeometryError,
    ManifoldPoint,
    TangentVector,
    check_same_base,
    check_same_model,
    model_ops,
)
from .core import geodesic_samples as _geodesic

CLAUSES = ("affinity", "exp-interp-geodesic", "hull-equality", "exp-isometry", "curvature")


@dataclass
class DefectReport:
    clause: str
    model: str
    defect: float
    argmax_param: Any
    sample_count: int
    seed: Optional[int] = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.clause not in CLAUSES:
            raise ValueError(f"unknown clause {self.clause!r}")
        if not self.defect >= 0:
            raise ValueError(f"defect must be nonnegative, got {self.defect}")

    def status(self, tol: float = 1e-9) -> str:
        return "falsified" if self.defect > tol else "consistent at sample level"

    def to_dict(self) -> dict:
        return asdict(self)


def _argmax_first(values: np.ndarray) -> int:
    # np.argmax returns the lowest index among ties
    return int(np.argmax(values))


def _frame_scale(p: ManifoldPoint) -> float:
    """Euclidean length of a unit tangent vector at p (the model is conformal)."""
    return float(1.0 / np.sqrt(model_ops(p.model).metric_factor(p.coords)))


def affinity_defect(
    p: ManifoldPoint,
    y: TangentVector,
    geodesic_samples: Sequence[tuple[ManifoldPoint, ManifoldPoint]],
    t_grid: int,
) -> DefectReport:
    """max |f_y(gamma(t)) - ((1-t) f_y(gamma(0)) + t f_y(gamma(1)))| with f_y(q) = g_p(log_p q, y)."""
    check_same_base(p, y)
    if not geodesic_samples:
        raise GeometryError("affinity_defect needs at least one geodesic")
    if t_grid < 1:
        raise GeometryError("t_grid must be positive")
    ops = model_ops(p.model)
    lam = ops.metric_factor(p.coords)
    ts = np.linspace(0.0, 1.0, t_grid + 1)

    def f(q):
        return lam * (ops.log(np.broadcast_to(p.coords, q.shape), q) @ y.components)

    gaps = []
    for q1, q2 in geodesic_samples:
        check_same_model(p, q1, q2)
        along = f(_geodesic(q1.coords, q2.coords, ts, q1.model))
        chord = (1.0 - ts) * along[0] + ts * along[-1]
        gaps.append(np.abs(along - chord))
    gaps = np.array(gaps)
    k = _argmax_first(gaps.ravel())
    g, j = divmod(k, ts.size)
    return DefectReport(
        "affinity", p.model, float(gaps.ravel()[k]), {"geodesic": g, "t": float(ts[j])}, int(gaps.size),
        details={"y": y.components.tolist()},
    )


def exp_interp_deviation(p: ManifoldPoint, q1: ManifoldPoint, q2: ManifoldPoint, t_grid: int) -> DefectReport:
    """max_t dist(exp_p((1-t) log_p q1 + t log_p q2), gamma_{q1 q2}(t))."""
    model = check_same_model(p, q1, q2)
    curve = convexity.exp_interp_curve(p, q1, q2, t_grid).coords
    ts = np.linspace(0.0, 1.0, t_grid + 1)
    gaps = model_ops(model).dist(curve, _geodesic(q1.coords, q2.coords, ts, q1.model))
    j = _argmax_first(gaps)
    return DefectReport(
        "exp-interp-geodesic", model, float(gaps[j]), float(ts[j]), int(ts.size),
        details={"degenerate": bool(np.array_equal(q1.coords, q2.coords))},
    )


@dataclass(frozen=True)
class HullSettings:
    seg_samples: int = 64
    tol: Optional[float] = None
    k_max: int = 8
    budget: int = 4096
    seed: int = 0


def hull_discrepancy(p: ManifoldPoint, S: convexity.PointCloud, settings: HullSettings = HullSettings()) -> DefectReport:
    """Hausdorff distance between the sampled convex hull and the sampled GC_p(S).

    The weight lattice uses the same resolution as the segment sampling.
    """
    check_same_model(p, S[0])
    hull = convexity.convex_hull_approx(S, settings.seg_samples, settings.tol, settings.k_max, settings.budget, settings.seed)
    gc = convexity.gc_hull_sample(p, S, settings.seg_samples)
    d_hg, i = convexity.directed_hausdorff(hull.cloud, gc)
    d_gh, j = convexity.directed_hausdorff(gc, hull.cloud)
    where = hull.cloud.coords[i] if d_hg >= d_gh else gc.coords[j]
    return DefectReport(
        "hull-equality", p.model, max(d_hg, d_gh), where.tolist(), len(hull.cloud) + len(gc), settings.seed,
        details={
            "hull_points": len(hull.cloud),
            "gc_points": len(gc),
            "hull_iterations": hull.iterations,
            "hull_converged": hull.converged,
            "pitch": hull.pitch,
        },
    )


def random_tangents(p: ManifoldPoint, n: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """n tangent components at p: uniform direction, metric norm uniform in (0, radius]."""
    directions = rng.normal(size=(n, p.dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    norms = radius * (1.0 - rng.random(n))
    return directions * (norms * _frame_scale(p))[:, None]


def exp_isometry_defect(
    p: ManifoldPoint,
    n_pairs: int = 256,
    radius: float = 2.0,
    seed: int = 0,
    pairs: Optional[Sequence[tuple[TangentVector, TangentVector]]] = None,
) -> DefectReport:
    """max |dist(exp_p u, exp_p v) - |u - v|_p| over seeded random pairs (or explicit ``pairs``)."""
    if radius <= 0:
        raise GeometryError("radius must be positive")
    ops = model_ops(p.model)
    if pairs is not None:
        for u, v in pairs:
            check_same_base(p, u, v)
        us = np.array([u.components for u, _ in pairs])
        vs = np.array([v.components for _, v in pairs])
    else:
        if n_pairs < 1:
            raise GeometryError("n_pairs must be positive")
        rng = np.random.default_rng(seed)
        us = random_tangents(p, n_pairs, radius, rng)
        vs = random_tangents(p, n_pairs, radius, rng)
    base = np.broadcast_to(p.coords, us.shape)
    manifold = ops.dist(ops.exp(base, us), ops.exp(base, vs))
    tangent = np.sqrt(ops.metric_factor(p.coords)) * np.linalg.norm(us - vs, axis=1)
    signed = manifold - tangent
    gaps = np.abs(signed)
    k = _argmax_first(gaps)
    return DefectReport(
        "exp-isometry", p.model, float(gaps[k]), k, int(gaps.size), None if pairs is not None else seed,
        details={"min_signed": float(signed.min()), "worst_pair": [us[k].tolist(), vs[k].tolist()]},
    )


def curvature_estimate(p: ManifoldPoint, r: float = 0.01, n_circle: int = 512) -> float:
    """Sectional curvature at p from the circumference of a small geodesic circle.

    K ~ 3 (2 pi r - C(r)) / (pi r^3). C(r) is measured as the perimeter of
    the geodesic polygon through n_circle points of the circle, rescaled by
    pi / (n sin(pi / n)) so that a flat circle gives exactly 2 pi r; without
    that rescaling the chord deficit alone would be of order
    pi^2 / (n r)^2 in K.
    """
    if not 0 < r <= 0.1:
        raise GeometryError(f"radius {r} outside (0, 0.1]")
    if n_circle < 64:
        raise GeometryError("n_circle must be at least 64")
    if p.dim < 2:
        raise GeometryError("curvature needs a 2-plane; got a 1-dimensional model")
    ops = model_ops(p.model)
    theta = 2.0 * np.pi * np.arange(n_circle) / n_circle
    tangents = np.zeros((n_circle, p.dim))
    scale = _frame_scale(p)
    tangents[:, 0] = r * scale * np.cos(theta)
    tangents[:, 1] = r * scale * np.sin(theta)
    ring = ops.exp(np.broadcast_to(p.coords, tangents.shape), tangents)
    perimeter = float(np.sum(ops.dist(ring, np.roll(ring, -1, axis=0))))
    circumference = perimeter * np.pi / (n_circle * np.sin(np.pi / n_circle))
    return float(3.0 * (2.0 * np.pi * r - circumference) / (np.pi * r**3))


def curvature_report(p: ManifoldPoint, r: float = 0.01, n_circle: int = 512) -> DefectReport:
    k = curvature_estimate(p, r, n_circle)
    return DefectReport("curvature", p.model, abs(k), r, n_circle, details={"estimate": k})


# ---------------------------------------------------------------------------
# batch


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    n_geodesics: int = 16
    t_grid: int = 16
    n_pairs: int = 256
    radius: float = 2.0
    # two-point sets: both hull samplings then share their points on R^n,
    # so the flat hull defect is pure rounding
    cloud_size: int = 2
    spread: float = 1.0
    hull: HullSettings = HullSettings()
    curvature_r: float = 0.01
    n_circle: int = 512


def random_points(p: ManifoldPoint, n: int, spread: float, rng: np.random.Generator) -> list[ManifoldPoint]:
    """Points exp_p(w) for random tangent w of metric norm <= spread."""
    ops = model_ops(p.model)
    w = random_tangents(p, n, spread, rng)
    coords = ops.exp(np.broadcast_to(p.coords, w.shape), w)
    return [ManifoldPoint(p.model, c) for c in coords]


def _worst_of(reports: Sequence[DefectReport]) -> tuple[int, DefectReport]:
    # ties go to the lowest index
    i = max(range(len(reports)), key=lambda k: (reports[k].defect, -k))
    return i, reports[i]


def run_suite(p: ManifoldPoint, config: SuiteConfig = SuiteConfig()) -> list[DefectReport]:
    """One report per clause on seeded random configurations around p."""
    rng = np.random.default_rng(config.seed)
    pts = random_points(p, 2 * config.n_geodesics, config.spread, rng)
    geodesics = list(zip(pts[0::2], pts[1::2]))
    y = TangentVector(p, random_tangents(p, 1, 1.0, rng)[0])

    affinity = affinity_defect(p, y, geodesics, config.t_grid)

    interp = [exp_interp_deviation(p, a, b, config.t_grid) for a, b in geodesics]
    worst, rep = _worst_of(interp)
    interp_report = DefectReport(
        "exp-interp-geodesic", p.model, rep.defect, {"geodesic": worst, "t": rep.argmax_param},
        sum(r.sample_count for r in interp),
    )

    cloud = convexity.PointCloud.from_points(random_points(p, config.cloud_size, config.spread, rng))
    hull = hull_discrepancy(p, cloud, config.hull)
    isometry = exp_isometry_defect(p, config.n_pairs, config.radius, int(rng.integers(2**31)))
    curv = curvature_report(p, config.curvature_r, config.n_circle)

    reports = [affinity, interp_report, hull, isometry, curv]
    for r in reports:
        r.seed = config.seed
    return reports


def example_suite(model: str = "halfplane", t_grid: int = 16, hull: HullSettings = HullSettings(),
                  curvature_r: float = 0.01, n_circle: int = 512) -> list[DefectReport]:
    """The five probes on the fixed configuration p = (0, 1), q1 = (1, sqrt 2), q2 = (-1, sqrt 2).

    Uses y = (0, 1) for the affinity probe and the pair (log_p q1, log_p q2)
    for the isometry probe. On ``"euclidean"`` the same coordinates are read
    as points of R^2.
    """
    p = ManifoldPoint(model, (0.0, 1.0))
    q1 = ManifoldPoint(model, (1.0, math.sqrt(2.0)))
    q2 = ManifoldPoint(model, (-1.0, math.sqrt(2.0)))
    ops = model_ops(model)
    eta1 = TangentVector(p, ops.log(p.coords, q1.coords))
    eta2 = TangentVector(p, ops.log(p.coords, q2.coords))
    return [
        affinity_defect(p, TangentVector(p, (0.0, 1.0)), [(q1, q2)], t_grid),
        exp_interp_deviation(p, q1, q2, t_grid),
        hull_discrepancy(p, convexity.PointCloud.from_points([q1, q2]), hull),
        exp_isometry_defect(p, pairs=[(eta1, eta2)]),
        curvature_report(p, curvature_r, n_circle),
    ]


#: lower bounds a half-plane run of ``example_suite`` must exceed
EXAMPLE_THRESHOLDS = {"affinity": 0.07, "exp-interp-geodesic": 0.07, "hull-equality": 0.05, "exp-isometry": 0.07}


def flat_signature(reports: Sequence[DefectReport], tol: float = 1e-9, curvature_tol: float = 1e-6) -> bool:
    """True when every defect vanishes: |K| <= curvature_tol, everything else <= tol."""
    return all(r.defect <= (curvature_tol if r.clause == "curvature" else tol) for r in reports)


def hyperbolic_signature(reports: Sequence[DefectReport], thresholds: Optional[dict] = None) -> bool:
    """True when every clause is falsified (defect above its threshold) and K is within 0.05 of -1."""
    thresholds = thresholds or {}
    for r in reports:
        if r.clause == "curvature":
            if not -1.05 <= r.details["estimate"] <= -0.95:
                return False
        elif not r.defect > thresholds.get(r.clause, 1e-9):
            return False
    return True
