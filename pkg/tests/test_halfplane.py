import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from hadamard_convexity import halfplane as hp
from hadamard_convexity.core import DomainError, GeometryError, TangentVector, geodesic_point, norm
from hadamard_convexity.halfplane import (
    hp_dist,
    hp_exp,
    hp_exp_base,
    hp_geodesic_params,
    hp_log,
    hp_log_base,
    hp_point,
    translate_dilate,
)

from .conftest import ALPHA, SQRT2, SQRT3, X, arccosh_dist, random_hp_points, random_hp_tangents


def ode_exp(p, w):
    """Oracle: integrate the geodesic equations of g = (du^2 + dv^2) / v^2 for unit time."""

    def rhs(_, y):
        u, v, du, dv = y
        return [du, dv, 2.0 * du * dv / v, (dv * dv - du * du) / v]

    sol = solve_ivp(rhs, (0.0, 1.0), [p[0], p[1], w[0], w[1]], method="DOP853", rtol=1e-13, atol=1e-13)
    return sol.y[:2, -1]


class TestDistance:
    @pytest.mark.parametrize(
        "a, b, expected",
        [
            ((0, 1), (0, math.e), 1.0),
            ((0, 1), (1, SQRT2), math.log(1 + SQRT2)),
            ((1, SQRT2), (-1, SQRT2), math.acosh(2.0)),
        ],
    )
    def test_examples(self, a, b, expected):
        assert hp_dist(hp_point(*a), hp_point(*b)) == pytest.approx(expected, abs=1e-14)
        assert arccosh_dist(a, b) == pytest.approx(expected, abs=1e-14)

    def test_reported_values(self):
        assert hp_dist(hp_point(0, 1), hp_point(1, SQRT2)) == pytest.approx(0.8813735870, abs=1e-10)
        assert hp_dist(hp_point(1, SQRT2), hp_point(-1, SQRT2)) == pytest.approx(1.3169578969, abs=1e-10)

    def test_matches_arccosh_formula(self, rng):
        a = random_hp_points(rng, 2000)
        b = random_hp_points(rng, 2000)
        ours = hp._dist(a, b)
        ref = np.array([arccosh_dist(x, y) for x, y in zip(a, b)])
        # the arccosh form itself loses ~sqrt(eps) for nearby points
        assert np.allclose(ours, ref, rtol=1e-12, atol=1e-7)

    def test_zero_and_symmetric(self, rng):
        a = random_hp_points(rng, 100)
        b = random_hp_points(rng, 100)
        assert np.all(hp._dist(a, a) == 0.0)
        assert np.array_equal(hp._dist(a, b), hp._dist(b, a))

    def test_nearby_points_keep_precision(self):
        d = hp_dist(hp_point(0.0, 1.0), hp_point(1e-10, 1.0))
        assert d == pytest.approx(1e-10, rel=1e-12)

    def test_rejects_invalid(self):
        with pytest.raises(DomainError):
            hp_dist(hp_point(0, 1), hp_point(0, 0))


class TestExpBase:
    def test_vertical_branch(self):
        got = hp_exp_base((0.0, ALPHA)).coords
        assert got[0] == 0.0
        assert got[1] == pytest.approx(X, abs=1e-12)
        assert got[1] == pytest.approx(1.8649332100, abs=1e-10)

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_example_vectors(self, sign):
        got = hp_exp_base((sign * ALPHA, ALPHA)).coords
        assert np.allclose(got, (sign * 1.0, SQRT2), atol=1e-12)

    def test_branch_formula_directly(self):
        u, v = hp._exp_base_branches(np.array([ALPHA, -ALPHA]), np.array([ALPHA, ALPHA]))
        assert np.allclose(u, [1.0, -1.0], atol=1e-15)
        assert np.allclose(v, [SQRT2, SQRT2], atol=1e-15)

    def test_radial_distance(self, rng):
        w = random_hp_tangents(rng, np.tile([0.0, 1.0], (2000, 1)))
        pts = hp._exp_base(w)
        d = hp._dist(np.tile([0.0, 1.0], (2000, 1)), pts)
        assert np.max(np.abs(d - np.linalg.norm(w, axis=1))) <= 1e-9

    def test_agrees_with_ode(self, rng):
        for _ in range(40):
            w = rng.normal(size=2) * 1.5
            assert np.allclose(hp_exp_base(w).coords, ode_exp((0.0, 1.0), w), rtol=1e-9, atol=1e-9)

    def test_branches_agree_with_rotation_form(self, rng):
        w = rng.normal(size=(5000, 2)) * 2
        w = w[np.abs(w[:, 0]) > 1e-3 * np.abs(w[:, 1])]
        u1, v1 = hp._exp_base_branches(w[:, 0], w[:, 1])
        u2, v2 = hp._exp_base_rotation(w[:, 0], w[:, 1])
        assert np.allclose(u1, u2, rtol=1e-10, atol=1e-10)
        assert np.allclose(v1, v2, rtol=1e-10, atol=1e-10)

    @pytest.mark.parametrize("beta", [-3.0, -1.0, -0.2, 0.3, 1.0, 2.5])
    @pytest.mark.parametrize("alpha", [1e-6, -1e-6])
    def test_continuous_across_vertical(self, alpha, beta):
        # First-order Jacobi field along the vertical geodesic: a perpendicular
        # perturbation alpha grows to hyperbolic length alpha sinh|beta| / |beta|,
        # i.e. Euclidean offset alpha e^beta sinh|beta| / |beta| at height e^beta.
        got = hp_exp_base((alpha, beta)).coords
        predicted = (alpha * math.exp(beta) * math.sinh(abs(beta)) / abs(beta), math.exp(beta))
        assert np.allclose(got, predicted, rtol=0, atol=1e-9)
        vertical = hp_exp_base((0.0, beta)).coords
        assert abs(got[1] - vertical[1]) <= 1e-9
        assert abs(got[0] - vertical[0]) <= 2 * abs(alpha) * math.exp(beta) * math.sinh(abs(beta)) / abs(beta)

    def test_tiny_alpha_near_guard(self):
        for alpha in (1e-13, 1e-11, 1e-9, 1e-7, 1e-5):
            got = hp_exp_base((alpha, 1.0)).coords
            assert got[0] == pytest.approx(alpha * math.e * math.sinh(1.0), rel=1e-6)
            assert got[1] == pytest.approx(math.e, abs=1e-12 + 10 * alpha**2)

    def test_zero_vector(self):
        assert np.array_equal(hp_exp_base((0.0, 0.0)).coords, (0.0, 1.0))

    @pytest.mark.parametrize("scale", [5e-324, 2.2250738585072014e-308, 1e-200])
    @pytest.mark.parametrize("beta", [1.0, -1.0])
    def test_subnormal_tangent(self, scale, beta):
        got = hp_exp_base((3e-5 * scale, beta * scale)).coords
        assert np.all(np.isfinite(got)) and got[1] == 1.0 and abs(got[0]) <= 1e-199

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            hp_exp_base((math.nan, 1.0))

    def test_accepts_tangent_vector_at_base(self):
        p = hp_point(0, 1)
        assert np.allclose(hp_exp_base(TangentVector(p, (ALPHA, ALPHA))).coords, (1, SQRT2))
        with pytest.raises(GeometryError):
            hp_exp_base(TangentVector(hp_point(0, 2), (1, 1)))


class TestLogBase:
    @pytest.mark.parametrize("v", [0.1, 0.5, 1.0, 2.0, 40.0])
    def test_vertical(self, v):
        assert np.allclose(hp_log_base(hp_point(0, v)).components, (0, math.log(v)), atol=1e-15)

    def test_example_vectors(self):
        assert np.allclose(hp_log_base(hp_point(1, SQRT2)).components, (ALPHA, ALPHA), atol=1e-15)
        assert np.allclose(hp_log_base(hp_point(-1, SQRT2)).components, (-ALPHA, ALPHA), atol=1e-15)
        assert ALPHA == pytest.approx(0.6232252401, abs=1e-10)

    def test_inverts_exp_and_norm(self, rng):
        q = random_hp_points(rng, 2000, spread=5)
        w = hp._log_base(q)
        assert np.allclose(hp._exp_base(w), q, rtol=1e-10, atol=1e-10)
        assert np.allclose(np.linalg.norm(w, axis=1), hp._dist(np.tile([0, 1.0], (2000, 1)), q), atol=1e-12)

    def test_matches_carrier_circle_direction(self, rng):
        # direction of the circle through (0,1) centred at c = (u^2+v^2-1)/(2u): (1, c) * sign(u)
        for u, v in random_hp_points(rng, 50):
            c = (u * u + v * v - 1) / (2 * u)
            direction = np.sign(u) * np.array([1.0, c]) / math.hypot(1.0, c)
            w = hp_log_base(hp_point(u, v)).components
            assert np.allclose(w, direction * hp_dist(hp_point(0, 1), hp_point(u, v)), rtol=1e-10, atol=1e-12)


class TestGeneralBase:
    def test_identity_at_base(self, rng):
        p = hp_point(0, 1)
        for w in rng.normal(size=(20, 2)):
            assert np.allclose(hp_exp(p, TangentVector(p, w)).coords, hp_exp_base(w).coords, atol=1e-15)

    def test_translated_dilated_vertical(self):
        p = hp_point(3, 2)
        got = hp_exp(p, TangentVector(p, (0, 2 * math.log(5)))).coords
        assert np.allclose(got, (3, 10), atol=1e-12)
        assert np.allclose(ode_exp((3.0, 2.0), (0.0, 2 * math.log(5))), (3, 10), atol=1e-9)

    def test_scaled_example(self):
        p = hp_point(0, 2)
        w = TangentVector(p, (2 * ALPHA, 2 * ALPHA))
        got = hp_exp(p, w)
        assert np.allclose(got.coords, (2, 2 * SQRT2), atol=1e-12)
        assert hp_dist(p, got) == pytest.approx(norm(p, w), abs=1e-12)
        assert norm(p, w) == pytest.approx(ALPHA * SQRT2, abs=1e-15)

    def test_agrees_with_ode(self, rng):
        base = random_hp_points(rng, 30)
        tangents = random_hp_tangents(rng, base, max_norm=3.0)
        for p, w in zip(base, tangents):
            got = hp._exp(p, w)
            assert np.allclose(got, ode_exp(p, w), rtol=1e-8, atol=1e-9 * p[1])

    def test_log_examples(self, p0, q1):
        assert np.allclose(hp_log(p0, q1).components, (ALPHA, ALPHA), atol=1e-15)
        assert np.array_equal(hp_log(q1, q1).components, (0.0, 0.0))
        assert np.allclose(hp_log(p0, hp_point(0, SQRT3)).components, (0, math.log(SQRT3)), atol=1e-15)
        assert math.log(SQRT3) == pytest.approx(0.5493061, abs=1e-7)

    def test_round_trips(self, rng):
        base = random_hp_points(rng, 1000)
        w = random_hp_tangents(rng, base)
        assert np.max(np.abs(hp._log(base, hp._exp(base, w)) - w)) <= 1e-9
        q = random_hp_points(rng, 1000)
        assert np.max(np.abs(hp._exp(base, hp._log(base, q)) - q)) <= 1e-9

    def test_radial_isometry(self, rng):
        base = random_hp_points(rng, 1000)
        w = random_hp_tangents(rng, base)
        d = hp._dist(base, hp._exp(base, w))
        assert np.max(np.abs(d - np.linalg.norm(w, axis=1) / base[:, 1])) <= 1e-9

    def test_expansion(self, rng):
        base = random_hp_points(rng, 1000)
        u = random_hp_tangents(rng, base)
        v = random_hp_tangents(rng, base)
        lhs = hp._dist(hp._exp(base, u), hp._exp(base, v))
        rhs = np.linalg.norm(u - v, axis=1) / base[:, 1]
        assert np.all(lhs >= rhs - 1e-9)

    def test_isometry_equivariance(self, rng):
        a = random_hp_points(rng, 500)
        b = random_hp_points(rng, 500)
        for shift, scale in [(3.0, 1.0), (0.0, 7.5), (-2.0, 0.01)]:
            moved = hp._dist(translate_dilate(a, shift, scale), translate_dilate(b, shift, scale))
            assert np.allclose(moved, hp._dist(a, b), rtol=1e-12, atol=0)


class TestGeodesicParams:
    def test_through_base_and_q1(self, p0, q1):
        arc = hp_geodesic_params(p0, q1)
        assert arc.kind == "semicircle"
        assert arc.center_u == pytest.approx(1.0, abs=1e-15)
        assert arc.radius == pytest.approx(SQRT2, abs=1e-15)

    def test_example_pair(self, q1, q2):
        arc = hp_geodesic_params(q1, q2)
        assert arc.kind == "semicircle"
        assert arc.center_u == pytest.approx(0.0, abs=1e-15)
        assert arc.radius == pytest.approx(SQRT3, abs=1e-15)

    def test_vertical(self):
        arc = hp_geodesic_params(hp_point(2, 1), hp_point(2, 5))
        assert arc.kind == "vertical" and arc.line_u == 2.0

    def test_coincident_points_rejected(self):
        with pytest.raises(GeometryError):
            hp_geodesic_params(hp_point(2, 1), hp_point(2, 1))

    def test_carrier_contains_geodesic(self, rng):
        pts = random_hp_points(rng, 200)
        for a, b in zip(pts[::2], pts[1::2]):
            qa, qb = hp_point(*a), hp_point(*b)
            arc = hp_geodesic_params(qa, qb)
            samples = np.array([geodesic_point(qa, qb, t).coords for t in np.linspace(0, 1, 11)])
            assert np.max(np.abs(arc.residual(samples))) <= 1e-9 * max(1.0, arc.radius or 1.0) ** 2
