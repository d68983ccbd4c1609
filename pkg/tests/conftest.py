import math
import sys

import numpy as np
import pytest

import hadamard_convexity  # noqa: F401  (registers models)
from hadamard_convexity.euclidean import euclid_point
from hadamard_convexity.halfplane import hp_point

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
# alpha = ln (sqrt2 + 1)^(1/sqrt2), x = (sqrt2 + 1)^(1/sqrt2)
ALPHA = math.log(1.0 + SQRT2) / SQRT2
X = (SQRT2 + 1.0) ** (1.0 / SQRT2)


def arccosh_dist(a, b):
    """Half-plane distance written exactly as the textbook arccosh formula."""
    (u1, v1), (u2, v2) = a, b
    return math.acosh(max(1.0, 1.0 + ((u2 - u1) ** 2 + (v2 - v1) ** 2) / (2.0 * v1 * v2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def p0():
    return hp_point(0.0, 1.0)


@pytest.fixture
def q1():
    return hp_point(1.0, SQRT2)


@pytest.fixture
def q2():
    return hp_point(-1.0, SQRT2)


def random_hp_points(rng, n, spread=2.0):
    return np.c_[rng.uniform(-spread, spread, n), np.exp(rng.uniform(-1.5, 1.5, n))]


def random_hp_tangents(rng, base, max_norm=5.0):
    """Tangent components at each base row with metric norm uniform in [0, max_norm]."""
    d = rng.normal(size=base.shape)
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * (max_norm * rng.random(len(base)) * base[:, 1])[:, None]


__all__ = ["ALPHA", "X", "SQRT2", "SQRT3", "arccosh_dist", "euclid_point", "hp_point"]


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("tests.test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.acceptance_line(n))
