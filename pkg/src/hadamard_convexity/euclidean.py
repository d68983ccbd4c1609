"""Flat model (R^n, e): the zero-defect baseline."""

import numpy as np

from .core import (
    EUCLIDEAN,
    ManifoldPoint,
    ModelOps,
    TangentVector,
    check_same_base,
    check_same_model,
    register_model,
)


def _validate(coords):
    pass


def _dist(a, b):
    return np.linalg.norm(np.asarray(b) - np.asarray(a), axis=-1)


def _dist_key(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    key = (b[..., 0] - a[..., 0]) ** 2
    for k in range(1, a.shape[-1]):
        diff = b[..., k] - a[..., k]
        diff *= diff
        key += diff
    return key


def _exp(p, w):
    return np.asarray(p) + np.asarray(w)


def _log(p, q):
    return np.asarray(q) - np.asarray(p)


def _metric_factor(p):
    return np.ones(np.shape(p)[:-1])


register_model(EUCLIDEAN, ModelOps(_validate, _dist, _exp, _log, _metric_factor, _dist_key, np.sqrt))


def euclid_point(*coords) -> ManifoldPoint:
    if len(coords) == 1 and np.ndim(coords[0]) > 0:
        coords = coords[0]
    return ManifoldPoint(EUCLIDEAN, coords)


def _require_euclidean(*points):
    model = check_same_model(*points)
    if model != EUCLIDEAN:
        raise ValueError(f"expected euclidean points, got {model!r}")


def euclid_dist(p: ManifoldPoint, q: ManifoldPoint) -> float:
    _require_euclidean(p, q)
    return float(_dist(p.coords, q.coords))


def euclid_exp(p: ManifoldPoint, w: TangentVector) -> ManifoldPoint:
    _require_euclidean(p)
    check_same_base(p, w)
    return euclid_point(_exp(p.coords, w.components))


def euclid_log(p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
    _require_euclidean(p, q)
    return TangentVector(p, _log(p.coords, q.coords))
