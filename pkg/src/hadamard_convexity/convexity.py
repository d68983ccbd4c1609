"""Hull constructions on finite point clouds.

Two hulls of a finite set S are compared:

* the convex hull C(S), approximated by repeatedly adding sampled geodesic
  segments between all current points until nothing new appears
  (:func:`convex_hull_approx`);
* the base-point dependent set exp_p(sum_i lambda_i log_p(q_i)) over convex
  weights lambda (:func:`gc_hull_sample`).

On R^n they coincide; on the half-plane they do not.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .config import DEFAULT_TOL
from .core import GeometryError, ManifoldPoint, check_same_model, geodesic_samples, model_ops

log = logging.getLogger(__name__)

DEFAULT_SNAP = 1e-4


@dataclass(eq=False)
class PointCloud:
    """Finite point set of one model, stored as an (N, d) coordinate array."""

    model: str
    coords: np.ndarray
    snap_resolution: float = DEFAULT_SNAP

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[None, :]
        if coords.ndim != 2:
            raise GeometryError(f"cloud coordinates must be 2-D, got shape {coords.shape}")
        if self.snap_resolution <= 0:
            raise GeometryError("snap_resolution must be positive")
        validate = model_ops(self.model).validate
        for row in coords:
            validate(row)
        self.coords = coords

    @classmethod
    def from_points(cls, points: Sequence[ManifoldPoint], snap_resolution: float = DEFAULT_SNAP) -> PointCloud:
        if not points:
            raise GeometryError("cannot build a cloud from no points")
        model = check_same_model(*points)
        return cls(model, np.array([q.coords for q in points]), snap_resolution)

    def __len__(self):
        return self.coords.shape[0]

    def __iter__(self) -> Iterator[ManifoldPoint]:
        return (ManifoldPoint(self.model, row) for row in self.coords)

    def __getitem__(self, i) -> ManifoldPoint:
        return ManifoldPoint(self.model, self.coords[i])

    @property
    def points(self) -> list[ManifoldPoint]:
        return list(self)

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def dedup(self, sort: bool = True) -> PointCloud:
        return PointCloud(self.model, dedup_coords(self.coords, self.snap_resolution, sort), self.snap_resolution)

    def contains(self, q: ManifoldPoint, tol: float = DEFAULT_TOL.roundtrip) -> bool:
        check_same_model(self[0], q)
        return bool(np.min(model_ops(self.model).dist(self.coords, q.coords)) <= tol)


def dedup_coords(coords: np.ndarray, snap: float, sort: bool = True) -> np.ndarray:
    """Greedy thinning: keep a point unless an already kept one lies within snap/2.

    Distances are ambient (coordinate) distances. With ``sort`` the input is
    first put in lexicographic order, which makes the result independent of
    the order points were generated in.
    """
    coords = np.asarray(coords, dtype=float)
    if sort:
        coords = coords[np.lexsort(coords.T[::-1])]
    radius = 0.5 * snap
    # neighbours strictly closer than snap/2; each is kept only if none of its
    # earlier neighbours was kept
    neighbours = cKDTree(coords).query_ball_point(coords, np.nextafter(radius, 0.0))
    kept = np.zeros(len(coords), dtype=bool)
    for i, near in enumerate(neighbours):
        kept[i] = not kept[near].any()
    return coords[kept]


def _check_pair(a: PointCloud, b: PointCloud):
    if len(a) == 0 or len(b) == 0:
        raise GeometryError("Hausdorff distance of an empty cloud")
    if a.model != b.model or a.dim != b.dim:
        raise GeometryError(f"cannot compare {a.model}/{a.dim} cloud with {b.model}/{b.dim} cloud")


def directed_hausdorff(a: PointCloud, b: PointCloud, chunk: int = 250_000) -> tuple[float, int]:
    """max_{x in a} min_{y in b} dist(x, y), with the index of the maximising x."""
    _check_pair(a, b)
    ops = model_ops(a.model)
    rows = max(1, chunk // len(b))
    nearest = np.empty(len(a))
    for start in range(0, len(a), rows):
        block = a.coords[start:start + rows, None, :]
        nearest[start:start + rows] = ops.dist_key(block, b.coords[None, :, :]).min(axis=1)
    i = int(np.argmax(nearest))
    return float(ops.key_to_dist(nearest[i])), i


def hausdorff(a: PointCloud, b: PointCloud) -> float:
    """Symmetric Hausdorff distance under the model's Riemannian distance."""
    return max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0])


# ---------------------------------------------------------------------------
# base-point hull


@dataclass(frozen=True)
class WeightedSupport:
    points: tuple[ManifoldPoint, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.points) == 0:
            raise GeometryError("support needs at least one point")
        if len(self.points) != len(self.weights):
            raise GeometryError(f"{len(self.points)} points but {len(self.weights)} weights")
        w = np.array(self.weights)
        if np.any(w < 0) or np.any(w > 1):
            raise GeometryError(f"weights must lie in [0, 1], got {self.weights}")
        if abs(w.sum() - 1.0) > DEFAULT_TOL.weight_sum:
            raise GeometryError(f"weights sum to {w.sum()}, not 1")
        check_same_model(*self.points)


def gc_point(p: ManifoldPoint, support: WeightedSupport) -> ManifoldPoint:
    """exp_p of the weighted average of log_p(q_i)."""
    check_same_model(p, *support.points)
    ops = model_ops(p.model)
    logs = np.array([ops.log(p.coords, q.coords) for q in support.points])
    return ManifoldPoint(p.model, ops.exp(p.coords, np.asarray(support.weights) @ logs))


def simplex_lattice(m: int, grid: int) -> np.ndarray:
    """All weight vectors (k_1, ..., k_m) / grid with nonnegative integer k summing to grid.

    For m = 2 the rows run (1, 0), (1 - 1/g, 1/g), ..., (0, 1).
    """
    if m < 1 or grid < 1:
        raise GeometryError("simplex lattice needs m >= 1 and grid >= 1")
    rows = []
    for bars in itertools.combinations(range(grid + m - 1), m - 1):
        edges = (-1,) + bars + (grid + m - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(m)])
    return np.array(rows[::-1], dtype=float) / grid


def gc_hull_sample(p: ManifoldPoint, S: PointCloud, weight_grid: int) -> PointCloud:
    """Sample GC_p(S) on the weight lattice of resolution ``weight_grid``.

    Only supports using all of S are enumerated: weight vectors with zeros
    already cover every sub-support. Output keeps lattice order (so for two
    points it is the curve ordered by t) and drops near-duplicates.
    """
    if len(S) == 0:
        raise GeometryError("empty point set")
    check_same_model(p, S[0])
    ops = model_ops(p.model)
    base = np.broadcast_to(p.coords, S.coords.shape)
    logs = ops.log(base, S.coords)
    weights = simplex_lattice(len(S), weight_grid)
    tangents = weights @ logs
    pts = ops.exp(np.broadcast_to(p.coords, tangents.shape), tangents)
    return PointCloud(p.model, dedup_coords(pts, S.snap_resolution, sort=False), S.snap_resolution)


def exp_interp_curve(p: ManifoldPoint, q1: ManifoldPoint, q2: ManifoldPoint, n_samples: int) -> PointCloud:
    """t -> exp_p((1 - t) log_p q1 + t log_p q2) at t = j / n_samples, j = 0..n_samples."""
    check_same_model(p, q1, q2)
    if n_samples < 1:
        raise GeometryError("n_samples must be positive")
    ops = model_ops(p.model)
    t = np.linspace(0.0, 1.0, n_samples + 1)[:, None]
    tangents = (1.0 - t) * ops.log(p.coords, q1.coords) + t * ops.log(p.coords, q2.coords)
    coords = ops.exp(np.broadcast_to(p.coords, tangents.shape), tangents)
    # exp_p(log_p q) = q; pin the endpoints instead of keeping round-trip error
    coords[0], coords[-1] = q1.coords, q2.coords
    return PointCloud(p.model, coords)


# ---------------------------------------------------------------------------
# iterated geodesic closure


@dataclass
class HullApprox:
    cloud: PointCloud
    iterations: int          # index k of the last set that differed from its successor
    converged: bool
    residuals: list[float] = field(default_factory=list)   # hausdorff(S_k, S_{k-1}), k = 1, 2, ...
    sizes: list[int] = field(default_factory=list)         # |S_k|, k = 0, 1, ...
    pitch: float = 0.0
    tol: float = 0.0


def _diameter(cloud: PointCloud) -> float:
    if len(cloud) < 2:
        return 0.0
    dist = model_ops(cloud.model).dist
    return float(max(dist(row[None, :], cloud.coords).max() for row in cloud.coords))


def _segment_points(coords, pairs, lengths, pitch, model):
    out = []
    for (i, j), d in zip(pairs, lengths):
        n = max(1, math.ceil(d / pitch - 1e-9))
        out.append(geodesic_samples(coords[i], coords[j], np.linspace(0.0, 1.0, n + 1), model))
    return out


def _pair_order(n: int, rng: np.random.Generator, enumerate_limit: int = 2_000_000) -> Iterable[tuple[int, int]]:
    """All pairs i < j in a seeded random order, or an endless seeded stream when there are too many."""
    total = n * (n - 1) // 2
    if total <= enumerate_limit:
        i, j = np.triu_indices(n, k=1)
        perm = rng.permutation(total)
        yield from zip(i[perm].tolist(), j[perm].tolist())
        return
    while True:
        i, j = rng.integers(0, n, size=(2, 4096))
        for a, b in zip(i.tolist(), j.tolist()):
            if a != b:
                yield (min(a, b), max(a, b))


def convex_hull_approx(
    S: PointCloud,
    seg_samples: int = 32,
    tol: Optional[float] = None,
    k_max: int = 8,
    budget: int = 4096,
    seed: int = 0,
) -> HullApprox:
    """Approximate C(S) = union of S_k, S_k = geodesic segments between points of S_{k-1}.

    Segments are sampled at a common pitch diam(S) / seg_samples, so the
    longest segment gets ``seg_samples`` intervals. When the segments of one
    iteration would produce more than ``budget`` sample points, pairs are
    taken in a seeded random order until the budget is used. Iteration stops
    once hausdorff(S_k, S_{k-1}) < tol (default: one pitch); ``iterations``
    is then k - 1, the first set already equal to its successor.
    """
    if len(S) == 0:
        raise GeometryError("empty point set")
    if seg_samples < 1 or k_max < 1 or budget < 1:
        raise GeometryError("seg_samples, k_max and budget must be positive")
    rng = np.random.default_rng(seed)
    dist = model_ops(S.model).dist
    current = S.dedup()
    diam = _diameter(current)
    pitch = diam / seg_samples if diam > 0 else 1.0
    tol = pitch if tol is None else tol
    if tol <= 0:
        raise GeometryError("tol must be positive")
    result = HullApprox(current, 0, False, sizes=[len(current)], pitch=pitch, tol=tol)

    for k in range(1, k_max + 1):
        n = len(current)
        pairs, lengths, used = [], [], 0
        for i, j in _pair_order(n, rng):
            d = float(dist(current.coords[i], current.coords[j]))
            cost = max(1, math.ceil(d / pitch - 1e-9)) + 1
            if used + cost > budget and pairs:
                break
            pairs.append((i, j))
            lengths.append(d)
            used += cost
        segments = _segment_points(current.coords, pairs, lengths, pitch, S.model)
        merged = np.concatenate([current.coords] + segments) if segments else current.coords
        nxt = PointCloud(S.model, dedup_coords(merged, S.snap_resolution), S.snap_resolution)
        residual = hausdorff(nxt, current)
        result.residuals.append(residual)
        result.sizes.append(len(nxt))
        log.debug("hull iteration %d: %d pairs, |S_k|=%d, residual=%.3e", k, len(pairs), len(nxt), residual)
        if residual < tol:
            result.cloud, result.iterations, result.converged = current, k - 1, True
            return result
        current = nxt
        result.cloud, result.iterations = current, k
    return result
