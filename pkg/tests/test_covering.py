"""Dyadic covering: extents, location, inscribed balls, charts."""

import math

import numpy as np
import pytest

from hyplab.covering import (
    ChartMap,
    DyadicRectangle,
    chart_forward,
    chart_inverse,
    chart_pushforward_check,
    inscribed_ball,
    inscribed_radius,
    locate,
    multiplicity_bound,
    rect_extents,
)
from hyplab.geometry import HalfPlanePoint, euclidean_image, riemannian_integral


def random_sample(rng, n):
    xs = rng.uniform(-100.0, 100.0, n)
    ys = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), n))
    return [HalfPlanePoint(float(x), float(y)) for x, y in zip(xs, ys)]


class TestRectExtents:
    def test_base_rectangle(self):
        (x0, x1), (y0, y1) = rect_extents(DyadicRectangle(0, 0))
        assert (x0, x1) == (-1.0, 1.0)
        assert (y0, y1) == (0.5, 1.5)

    def test_shifted_scaled(self):
        (x0, x1), (y0, y1) = rect_extents(DyadicRectangle(1, 2))
        assert (x0, x1) == (2.0, 6.0)
        assert (y0, y1) == (1.0, 3.0)

    def test_coarse_scale_parameter(self):
        (x0, x1), (y0, y1) = rect_extents(DyadicRectangle(0, 0, 2.0))
        assert (x0, x1) == (-1.0, 1.0)
        assert (y0, y1) == (0.25, 2.25)

    def test_rejects_bad_scale(self):
        with pytest.raises(ValueError):
            DyadicRectangle(0, 0, 0.0)


class TestLocate:
    def test_known_point_memberships(self):
        # every returned rectangle must contain the point, and the four
        # containing rectangles are recovered exactly
        z = HalfPlanePoint(0.7, 1.2)
        hits = locate(z, 1.0)
        found = {(r.j, r.k) for r in hits}
        assert found == {(0, 0), (0, 1), (1, 0), (1, 1)}
        for rect in hits:
            (x0, x1), (y0, y1) = rect_extents(rect)
            assert x0 < z.x < x1 and y0 < z.y < y1

    def test_covering_nonempty_everywhere(self):
        rng = np.random.default_rng(21)
        for z in random_sample(rng, 2000):
            assert locate(z, 1.0), f"no rectangle contains {z}"

    def test_multiplicity_bounded_and_stable(self):
        maxima = []
        for seed in (5, 6):
            rng = np.random.default_rng(seed)
            counts = [len(locate(z, 1.0)) for z in random_sample(rng, 2000)]
            assert min(counts) >= 1
            maxima.append(max(counts))
        assert maxima[0] == maxima[1] <= multiplicity_bound(1.0)

    def test_completeness_against_exhaustive_window(self):
        # brute-force every (j, k) in a window around the point
        rng = np.random.default_rng(22)
        for z in random_sample(rng, 200):
            hits = {(r.j, r.k) for r in locate(z, 1.0)}
            j_center = int(math.floor(math.log2(z.y)))
            brute = set()
            for j in range(j_center - 3, j_center + 4):
                k_center = int(math.floor(z.x / 2.0**j))
                for k in range(k_center - 3, k_center + 4):
                    if DyadicRectangle(j, k).contains(z):
                        brute.add((j, k))
            assert hits == brute

    def test_other_scale_parameters_cover(self):
        rng = np.random.default_rng(23)
        for rp in (0.5, 2.0):
            for z in random_sample(rng, 300):
                hits = locate(z, rp)
                assert hits
                assert len(hits) <= multiplicity_bound(rp)


class TestInscribedBall:
    def test_unit_scale_radius(self):
        # tanh R = min(1/2, 1/2) at scale parameter 1
        np.testing.assert_allclose(inscribed_radius(1.0), math.atanh(0.5), rtol=1e-15)

    def test_center_height_factor(self):
        ball = inscribed_ball(DyadicRectangle(0, 0))
        np.testing.assert_allclose(ball.center.y, 1.0 / math.cosh(math.atanh(0.5)), rtol=1e-15)
        np.testing.assert_allclose(ball.center.y, math.sqrt(3.0) / 2.0, rtol=1e-12)

    def test_radius_vanishes_with_scale(self):
        for rp in (0.5, 0.1, 0.01, 1e-4):
            assert 0 < inscribed_radius(rp) < inscribed_radius(1.0)
        assert inscribed_radius(1e-6) < 1e-5

    def test_containment_by_interval_arithmetic(self):
        # the Euclidean image has center height b and radius b tanh R by
        # construction; check it against the rectangle extents exactly
        for rp in (1.0, 2.0, 0.7):
            m = min(1.0 - 2.0**-rp, 1.5**rp - 1.0)
            for j in range(-3, 4):
                for k in range(-3, 4):
                    rect = DyadicRectangle(j, k, rp)
                    (x0, x1), (y0, y1) = rect_extents(rect)
                    b = 2.0 ** (rp * j)
                    assert b * k - b * m >= x0
                    assert b * k + b * m <= x1
                    assert b - b * m >= y0
                    assert b * (1.0 + m) <= y1

    def test_euclidean_image_matches_analytic_form(self):
        for j, k in ((0, 0), (2, -3), (-1, 5)):
            rect = DyadicRectangle(j, k)
            center, radius = euclidean_image(inscribed_ball(rect))
            b = 2.0**j
            np.testing.assert_allclose([center.x, center.y], [b * k, b], rtol=1e-12)
            np.testing.assert_allclose(radius, b * 0.5, rtol=1e-12)


class TestCharts:
    def test_plugging_in_the_map(self):
        X, Y = chart_forward(ChartMap(1, 2), HalfPlanePoint(4.0, 2.0))
        assert (X, Y) == (0.0, 1.0)

    def test_identity_chart(self):
        z = HalfPlanePoint(0.3, 0.9)
        assert chart_forward(ChartMap(0, 0), z) == (0.3, 0.9)

    def test_corners_map_to_reference_corners(self):
        chart = ChartMap(3, -5)
        rect = DyadicRectangle(3, -5)
        (x0, x1), (y0, y1) = rect_extents(rect)
        corners = [(x0, y0), (x0, y1), (x1, y0), (x1, y1)]
        images = {chart.forward(HalfPlanePoint(x, y)) for x, y in corners}
        expected = {(-1.0, 0.5), (-1.0, 1.5), (1.0, 0.5), (1.0, 1.5)}
        for img in images:
            assert any(np.allclose(img, e, rtol=1e-12) for e in expected)

    def test_roundtrip_identity(self):
        rng = np.random.default_rng(24)
        chart = ChartMap(4, -7)
        for _ in range(100):
            z = HalfPlanePoint(float(rng.uniform(-300, 300)), float(np.exp(rng.uniform(-1, 5))))
            X, Y = chart.forward(z)
            back = chart.inverse(X, Y)
            np.testing.assert_allclose([back.x, back.y], [z.x, z.y], rtol=1e-14)

    def test_inverse_rejects_nonpositive_height(self):
        with pytest.raises(ValueError):
            chart_inverse(ChartMap(0, 0), 0.0, -1.0)

    def test_chart_preserves_hyperbolic_laplacian(self):
        # finite-difference check of y^2 (f_xx + f_yy) against
        # Y^2 (g_XX + g_YY) for g = f composed with the inverse chart
        chart = ChartMap(2, 3)

        def f(x, y):
            return math.sin(0.7 * x) * math.exp(-0.3 * (y - 5.0) ** 2)

        def g(X, Y):
            z = chart.inverse(X, Y)
            return f(z.x, z.y)

        def laplacian(fn, a, b, h):
            return (
                fn(a + h, b) + fn(a - h, b) + fn(a, b + h) + fn(a, b - h) - 4.0 * fn(a, b)
            ) / h**2

        z = HalfPlanePoint(12.5, 4.3)
        X, Y = chart.forward(z)
        h = 1e-4
        lhs = z.y**2 * laplacian(f, z.x, z.y, h)
        rhs = Y**2 * laplacian(g, X, Y, h / chart.base)
        np.testing.assert_allclose(rhs, lhs, rtol=1e-5, atol=1e-8)


class TestChartPushforward:
    def test_constant_base_rectangle(self):
        check = chart_pushforward_check(lambda X, Y: np.ones_like(X), 0, 0)
        np.testing.assert_allclose(check.reference, 2.0, rtol=1e-10)
        np.testing.assert_allclose(check.pushforward, 2.0, rtol=1e-10)

    def test_exact_identity_far_rectangle(self):
        check = chart_pushforward_check(lambda X, Y: np.ones_like(X), 5, -2)
        assert abs(check.reference - check.pushforward) < 1e-10

    def test_identity_for_nonconstant_integrand(self):
        check = chart_pushforward_check(lambda X, Y: Y, 3, 4)
        assert abs(check.reference - check.pushforward) < 1e-10

    def test_hyperbolic_comparable_within_stated_window(self):
        for j, k in ((0, 0), (2, -1), (-3, 7)):
            check = chart_pushforward_check(lambda X, Y: 1.0 + 0.2 * X + 0.1 * Y, j, k)
            ratio = check.hyperbolic / check.reference
            assert (2.0 / 3.0) ** 2 - 1e-9 <= ratio <= 4.0 + 1e-9


class TestNormEquivalence:
    def test_partition_bounds_for_compact_bump(self):
        # sum of rectangle norms lies between the norm and N times it
        def f(x, y):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            inside = (np.abs(x - 0.7) < 1.2) & (np.abs(y - 2.6) < 1.8) & (y > 0.8)
            bump = np.zeros_like(x)
            w = np.clip(1 - ((x - 0.7) / 1.2) ** 2, 1e-12, None)
            h = np.clip(1 - ((y - 2.6) / 1.8) ** 2, 1e-12, None)
            bump = np.where(inside, np.exp(-1.0 / w - 1.0 / h), 0.0)
            return bump

        def f_sq(x, y):
            return f(x, y) ** 2

        # total norm over a box that contains the support
        from hyplab.quadrature import DEFAULT_QUAD, gauss_legendre_doubling

        def row(y):
            val, _ = gauss_legendre_doubling(lambda x: f_sq(x, np.full_like(x, y)), -0.6, 2.0,
                                             DEFAULT_QUAD)
            return val / y**2

        total, _ = gauss_legendre_doubling(np.vectorize(row), 0.8, 4.4, DEFAULT_QUAD, n0=64)

        js = range(-1, 3)
        ks = range(-6, 8)
        partial = 0.0
        for j in js:
            for k in ks:
                partial += riemannian_integral(f_sq, DyadicRectangle(j, k))
        assert total * (1 - 1e-6) <= partial <= 4.0 * total * (1 + 1e-6)
