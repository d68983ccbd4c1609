"""Points, tangent vectors and model-independent geodesic utilities.

Every operation dispatches on the model tag carried by its arguments. Two
models are registered by the package: ``"euclidean"`` (R^n, any n >= 1) and
``"halfplane"`` (the Poincare upper half-plane). Mixing models, or Euclidean
points of different dimension, raises :class:`ModelMismatchError`.

Each model supplies vectorised array kernels operating on trailing-axis
coordinates, so the hull and probe code can evaluate thousands of points at
once while the point-level API below stays small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .config import DEFAULT_TOL

EUCLIDEAN = "euclidean"
HALFPLANE = "halfplane"


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class ModelMismatchError(GeometryError):
    pass


class DomainError(GeometryError):
    """A coordinate lies outside the model (e.g. v <= 0 on the half-plane)."""


class ModelOps(NamedTuple):
    validate: Callable[[np.ndarray], None]
    dist: Callable[[np.ndarray, np.ndarray], np.ndarray]
    exp: Callable[[np.ndarray, np.ndarray], np.ndarray]
    log: Callable[[np.ndarray, np.ndarray], np.ndarray]
    # conformal factor lam(p) with g_p = lam(p) * <.,.>_euclid
    metric_factor: Callable[[np.ndarray], np.ndarray]
    # dist == key_to_dist(dist_key(a, b)) with key_to_dist increasing; lets
    # nearest-point searches skip the transcendental on every pair
    dist_key: Callable[[np.ndarray, np.ndarray], np.ndarray]
    key_to_dist: Callable[[np.ndarray], np.ndarray]


_MODELS: dict[str, ModelOps] = {}


def register_model(name: str, ops: ModelOps) -> None:
    _MODELS[name] = ops


def model_ops(model: str) -> ModelOps:
    try:
        return _MODELS[model]
    except KeyError:
        raise GeometryError(f"unknown model {model!r}; known: {sorted(_MODELS)}") from None


def _as_coords(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    model: str
    coords: np.ndarray

    def __post_init__(self):
        coords = _as_coords(self.coords)
        object.__setattr__(self, "coords", coords)
        if coords.size == 0:
            raise GeometryError("a point needs at least one coordinate")
        if not np.all(np.isfinite(coords)):
            raise DomainError(f"non-finite coordinates {coords}")
        model_ops(self.model).validate(coords)

    @property
    def dim(self) -> int:
        return self.coords.size

    def __repr__(self):
        return f"ManifoldPoint({self.model!r}, {self.coords.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, ManifoldPoint):
            return NotImplemented
        return self.model == other.model and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash((self.model, self.coords.tobytes()))


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: ManifoldPoint
    components: np.ndarray

    def __post_init__(self):
        comps = _as_coords(self.components)
        object.__setattr__(self, "components", comps)
        if comps.size != self.base.dim:
            raise GeometryError(
                f"tangent vector has {comps.size} components, base point has dim {self.base.dim}"
            )
        if not np.all(np.isfinite(comps)):
            raise DomainError(f"non-finite tangent components {comps}")

    @property
    def model(self) -> str:
        return self.base.model

    def __repr__(self):
        return f"TangentVector(base={self.base!r}, components={self.components.tolist()})"

    # Linear structure of T_pM; both operands must share the base point.
    def __add__(self, other: TangentVector) -> TangentVector:
        check_same_base(self.base, other)
        return TangentVector(self.base, self.components + other.components)

    def __sub__(self, other: TangentVector) -> TangentVector:
        check_same_base(self.base, other)
        return TangentVector(self.base, self.components - other.components)

    def __mul__(self, scalar: float) -> TangentVector:
        return TangentVector(self.base, float(scalar) * self.components)

    __rmul__ = __mul__


def point(model: str, *coords: float) -> ManifoldPoint:
    """Shorthand: ``point("halfplane", 0, 1)``."""
    if len(coords) == 1 and np.ndim(coords[0]) > 0:
        coords = coords[0]
    return ManifoldPoint(model, coords)


def check_same_model(*points: ManifoldPoint) -> str:
    first = points[0]
    for q in points[1:]:
        if q.model != first.model:
            raise ModelMismatchError(f"cannot mix models {first.model!r} and {q.model!r}")
        if q.dim != first.dim:
            raise ModelMismatchError(f"dimension mismatch: {first.dim} vs {q.dim}")
    return first.model


def check_same_base(p: ManifoldPoint, *vectors: TangentVector) -> None:
    for w in vectors:
        check_same_model(p, w.base)
        if not np.array_equal(w.base.coords, p.coords):
            raise GeometryError(f"tangent vector based at {w.base.coords} used at {p.coords}")


def metric_inner(p: ManifoldPoint, u: TangentVector, v: TangentVector) -> float:
    """Riemannian inner product g_p(u, v)."""
    check_same_base(p, u, v)
    lam = model_ops(p.model).metric_factor(p.coords)
    return float(lam * np.dot(u.components, v.components))


def norm(p: ManifoldPoint, u: TangentVector) -> float:
    check_same_base(p, u)
    lam = model_ops(p.model).metric_factor(p.coords)
    return float(np.sqrt(lam) * math.hypot(*u.components))


def dist(p: ManifoldPoint, q: ManifoldPoint) -> float:
    model = check_same_model(p, q)
    return float(model_ops(model).dist(p.coords, q.coords))


def exp(p: ManifoldPoint, w: TangentVector) -> ManifoldPoint:
    check_same_base(p, w)
    return ManifoldPoint(p.model, model_ops(p.model).exp(p.coords, w.components))


def log(p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
    model = check_same_model(p, q)
    return TangentVector(p, model_ops(model).log(p.coords, q.coords))


def zero_vector(p: ManifoldPoint) -> TangentVector:
    return TangentVector(p, np.zeros(p.dim))


def _check_unit_interval(t: float) -> None:
    if not (0.0 <= t <= 1.0):
        raise GeometryError(f"geodesic parameter t={t} outside [0, 1]")


def geodesic_point(q1: ManifoldPoint, q2: ManifoldPoint, t: float) -> ManifoldPoint:
    """gamma(t) = exp_{q1}(t * log_{q1}(q2)), the constant-speed minimal geodesic."""
    model = check_same_model(q1, q2)
    _check_unit_interval(t)
    ops = model_ops(model)
    return ManifoldPoint(model, ops.exp(q1.coords, t * ops.log(q1.coords, q2.coords)))


def geodesic_samples(q1: np.ndarray, q2: np.ndarray, ts: np.ndarray, model: str) -> np.ndarray:
    """Array kernel: gamma(t) for every t in ``ts``, shape (len(ts), d); t = 0 and 1 give q1, q2 exactly."""
    ops = model_ops(model)
    q1 = np.asarray(q1, dtype=float)
    ts = np.asarray(ts, dtype=float)
    pts = ops.exp(np.broadcast_to(q1, (ts.size, q1.size)), ts[:, None] * ops.log(q1, q2))
    pts[ts == 0.0] = q1
    pts[ts == 1.0] = q2
    return pts


@dataclass(frozen=True)
class GeodesicSegment:
    """Minimal geodesic from ``start`` to ``end`` parameterised on [0, 1]."""

    start: ManifoldPoint
    end: ManifoldPoint
    length: float

    @classmethod
    def between(cls, start: ManifoldPoint, end: ManifoldPoint) -> GeodesicSegment:
        return cls(start, end, dist(start, end))

    def __post_init__(self):
        check_same_model(self.start, self.end)
        if self.length < 0:
            raise GeometryError("segment length must be nonnegative")
        actual = dist(self.start, self.end)
        if abs(actual - self.length) > DEFAULT_TOL.roundtrip * (1.0 + actual):
            raise GeometryError(f"length {self.length} disagrees with distance {actual}")

    def __call__(self, t: float) -> ManifoldPoint:
        _check_unit_interval(t)
        if t == 0.0:
            return self.start
        if t == 1.0:
            return self.end
        return geodesic_point(self.start, self.end, t)

    def sample(self, n: int) -> np.ndarray:
        """Coordinates at n + 1 uniform parameters, endpoints exact."""
        return geodesic_samples(self.start.coords, self.end.coords, np.linspace(0, 1, n + 1), self.start.model)
