"""Region membership, masses, thickness scans and the file schema."""

import json
import math

import numpy as np
import pytest

from hyplab.covering import DyadicRectangle, inscribed_ball
from hyplab.geometry import GeodesicBall, HalfPlanePoint, apply_isometry, ball_volume
from hyplab.quadrature import QuadratureSpec
from hyplab.regions import (
    EuclideanDisc,
    EuclideanRect,
    Region,
    Replication,
    VerticalStrip,
    ball_mass,
    load_region,
    membership,
    monte_carlo_ball_mass,
    rect_mass,
    rect_thickness_scan,
    region_from_dict,
    region_to_dict,
    save_region,
    thickness_scan,
)

UNIT_BALL = GeodesicBall(HalfPlanePoint(0.0, 1.0), 1.0)


def strips_region(width=0.5, period=2.5, j_span=20):
    """Vertical strips of the given width, repeated with the given period
    at every dyadic scale; a standard thick test set."""
    base = EuclideanRect(0.0, width, 1.0, 2.0)
    return Region((base,), replication=Replication(period, 2.0, -j_span, j_span))


class TestMembership:
    def test_full_and_empty(self):
        z = HalfPlanePoint(3.0, 0.7)
        assert membership(Region.full(), z)
        assert not membership(Region.empty(), z)

    def test_vertical_strip(self):
        strip = Region((VerticalStrip(0.0, 1.0),))
        assert membership(strip, HalfPlanePoint(0.5, 7.0))
        assert not membership(strip, HalfPlanePoint(1.5, 7.0))

    def test_disc_and_ball_agree_on_euclidean_image(self):
        ball = GeodesicBall(HalfPlanePoint(0.3, 2.0), 0.8)
        from hyplab.geometry import euclidean_image

        center, radius = euclidean_image(ball)
        disc_region = Region((EuclideanDisc(center.x, center.y, radius),))
        ball_region = Region((ball,))
        rng = np.random.default_rng(31)
        xs = rng.uniform(-2, 3, 500)
        ys = np.exp(rng.uniform(-1, 2, 500))
        np.testing.assert_array_equal(
            disc_region.contains_xy(xs, ys), ball_region.contains_xy(xs, ys)
        )

    def test_replicated_strips_cover_all_scales(self):
        region = strips_region()
        # the same slope-and-log-height pattern repeats at doubled heights
        assert membership(region, HalfPlanePoint(0.2, 1.5))
        assert membership(region, HalfPlanePoint(0.4, 3.0))
        assert not membership(region, HalfPlanePoint(1.5, 1.5))

    def test_complement_flips(self):
        region = Region((VerticalStrip(0.0, 1.0),), complement=True)
        assert not membership(region, HalfPlanePoint(0.5, 7.0))
        assert membership(region, HalfPlanePoint(1.5, 7.0))


class TestBallMass:
    def test_full_plane_gives_ball_volume(self):
        np.testing.assert_allclose(ball_mass(Region.full(), UNIT_BALL),
                                   ball_volume(1.0), rtol=1e-8)

    def test_empty_region_gives_zero(self):
        assert ball_mass(Region.empty(), UNIT_BALL) == 0.0

    def test_half_ball_by_symmetry_oracle(self):
        # the volume element is symmetric in x about the center line
        half = Region((VerticalStrip(0.0, math.inf),))
        np.testing.assert_allclose(ball_mass(half, UNIT_BALL),
                                   0.5 * ball_volume(1.0), atol=1e-4)

    def test_monte_carlo_cross_check_disc_cap(self):
        region = Region((EuclideanDisc(0.3, 1.4, 0.5),))
        sections = ball_mass(region, UNIT_BALL)
        rng = np.random.default_rng(77)
        mc, stderr = monte_carlo_ball_mass(region, UNIT_BALL, 400_000, rng)
        assert abs(sections - mc) < 4.0 * stderr

    def test_mc_path_used_when_requested(self):
        quad = QuadratureSpec(mc_samples=50_000)
        rng = np.random.default_rng(5)
        region = Region((EuclideanDisc(0.3, 1.4, 0.5),))
        approx = ball_mass(region, UNIT_BALL, quad, rng=rng)
        exact = ball_mass(region, UNIT_BALL)
        assert abs(approx - exact) < 0.05 * ball_volume(1.0)

    def test_bounded_between_zero_and_volume(self):
        rng = np.random.default_rng(32)
        region = strips_region()
        quad = QuadratureSpec(rel_tol=1e-5, abs_tol=1e-8)
        for _ in range(5):
            center = HalfPlanePoint(float(rng.uniform(-4, 4)), float(np.exp(rng.uniform(-1, 1))))
            ball = GeodesicBall(center, float(rng.uniform(0.3, 2.0)))
            m = ball_mass(region, ball, quad)
            assert 0.0 <= m <= ball_volume(ball.radius) + 1e-12


class TestRectMass:
    def test_full_plane_antiderivative(self):
        np.testing.assert_allclose(rect_mass(Region.full(), DyadicRectangle(0, 0)),
                                   8.0 / 3.0, rtol=1e-9)

    def test_empty(self):
        assert rect_mass(Region.empty(), DyadicRectangle(0, 0)) == 0.0

    def test_isometry_equivariance(self):
        # doubling maps the (0, k) rectangle onto the (1, k) rectangle
        region = Region((EuclideanDisc(0.1, 1.0, 0.35),))
        scaled = Region((EuclideanDisc(0.2, 2.0, 0.7),))
        m0 = rect_mass(region, DyadicRectangle(0, 0))
        m1 = rect_mass(scaled, DyadicRectangle(1, 0))
        np.testing.assert_allclose(m0, m1, rtol=1e-8)

    def test_rect_mass_dominates_inscribed_ball_mass(self):
        region = Region((EuclideanRect(-0.4, 0.6, 0.6, 1.2),))
        rect = DyadicRectangle(0, 0)
        ball = inscribed_ball(rect)
        quad = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9)
        assert rect_mass(region, rect, quad) >= ball_mass(region, ball, quad) - 1e-6

    def test_additivity_on_disjoint_union(self):
        left = Region((EuclideanRect(-0.9, -0.2, 0.6, 1.4),))
        right = Region((EuclideanRect(0.1, 0.8, 0.6, 1.4),))
        union = Region(left.primitives + right.primitives)
        rect = DyadicRectangle(0, 0)
        np.testing.assert_allclose(
            rect_mass(union, rect),
            rect_mass(left, rect) + rect_mass(right, rect),
            rtol=1e-9,
        )


class TestThicknessScan:
    def test_full_plane_certifies(self):
        cert = thickness_scan(Region.full(), 1.0, 3.0, ((-1.0, 1.0), (-0.7, 0.7)), 0.5)
        assert cert.mode == "certified-on-grid"
        np.testing.assert_allclose(cert.min_mass, ball_volume(1.0), rtol=1e-8)

    def test_periodic_strips_certify_positive_mass(self):
        region = strips_region()
        quad = QuadratureSpec(rel_tol=1e-4, abs_tol=1e-7)
        cert = thickness_scan(region, 2.0, 1e-3, ((-1.25, 1.25), (-0.8, 0.8)), 0.85, quad)
        assert cert.mode == "certified-on-grid"
        assert cert.min_mass > 0.0

    def test_far_disc_refuted_with_witness(self):
        region = Region((EuclideanDisc(500.0, 1.0, 0.2),))
        cert = thickness_scan(region, 1.0, 0.1, ((-0.5, 0.5), (-0.2, 0.2)), 0.5)
        assert cert.mode == "refuted"
        assert cert.witness is not None
        # the witness mass was computed exactly at the witness
        mass = ball_mass(region, GeodesicBall(cert.witness, 1.0))
        assert mass < 0.1

    def test_grid_description_recorded(self):
        cert = thickness_scan(Region.full(), 0.5, 0.1, ((0.0, 1.0), (0.0, 0.5)), 0.5)
        assert cert.grid["nodes"] >= 4
        assert cert.grid["failed"] == 0


class TestRectThicknessScan:
    def test_full_plane_minimum(self):
        min_mass, argmin = rect_thickness_scan(Region.full(), 1.0, range(-1, 2), range(-1, 2))
        np.testing.assert_allclose(min_mass, 8.0 / 3.0, rtol=1e-9)

    def test_empty_region(self):
        min_mass, _ = rect_thickness_scan(Region.empty(), 1.0, range(0, 1), range(0, 1))
        assert min_mass == 0.0

    def test_monotone_in_region(self):
        small = Region((EuclideanRect(-0.2, 0.2, 0.8, 1.2),))
        big = Region((EuclideanRect(-0.5, 0.5, 0.6, 1.4),))
        j_range, k_range = range(0, 1), range(-1, 2)
        m_small, _ = rect_thickness_scan(small, 1.0, j_range, k_range)
        m_big, _ = rect_thickness_scan(big, 1.0, j_range, k_range)
        assert m_small <= m_big + 1e-12

    def test_exceeds_delta_when_balls_certified(self):
        # rectangle masses dominate the masses of their inscribed balls
        region = strips_region()
        quad = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9)
        rect = DyadicRectangle(0, 0)
        ball = inscribed_ball(rect)
        delta = ball_mass(region, ball, quad)
        min_mass, _ = rect_thickness_scan(region, 1.0, range(0, 1), range(0, 1), quad)
        assert min_mass >= delta - 1e-6


class TestMassIsometryEquivariance:
    def test_simultaneous_mapping(self):
        region = Region((EuclideanDisc(0.4, 1.1, 0.3), EuclideanRect(-1.0, -0.2, 0.5, 0.9)))
        scale, shift = 3.0, -2.0
        mapped = Region((
            EuclideanDisc(scale * 0.4 + shift, scale * 1.1, scale * 0.3),
            EuclideanRect(scale * -1.0 + shift, scale * -0.2 + shift, scale * 0.5, scale * 0.9),
        ))
        ball = GeodesicBall(HalfPlanePoint(0.0, 1.0), 1.2)
        mapped_ball = GeodesicBall(apply_isometry(ball.center, scale, shift), 1.2)
        quad = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9)
        np.testing.assert_allclose(
            ball_mass(region, ball, quad), ball_mass(mapped, mapped_ball, quad), rtol=1e-5
        )


class TestRegionFiles:
    def test_roundtrip(self, tmp_path):
        region = strips_region()
        path = tmp_path / "strips.region.json"
        save_region(path, region)
        loaded = load_region(path)
        assert loaded == region

    def test_all_primitive_kinds_roundtrip(self, tmp_path):
        region = Region(
            (
                EuclideanRect(0.0, 1.0, 0.5, 1.5),
                EuclideanDisc(0.0, 2.0, 0.5),
                VerticalStrip(-math.inf, 0.0),
                GeodesicBall(HalfPlanePoint(1.0, 1.0), 0.7),
            ),
            complement=True,
        )
        path = tmp_path / "mixed.region.json"
        save_region(path, region)
        assert load_region(path) == region

    def test_unknown_version_rejected(self, tmp_path):
        path = tmp_path / "bad.region.json"
        payload = region_to_dict(Region.full())
        payload["version"] = 99
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError, match="version"):
            load_region(path)

    def test_unknown_primitive_rejected(self):
        with pytest.raises(ValueError, match="primitive"):
            region_from_dict({"version": 1, "primitives": [{"type": "blob"}]})


class TestValidation:
    def test_replication_needs_ratio_above_one(self):
        with pytest.raises(ValueError):
            Replication(1.0, 1.0, 0, 1)

    def test_replicated_infinite_strip_rejected(self):
        with pytest.raises(ValueError):
            Region((VerticalStrip(0.0, math.inf),), replication=Replication(1.0, 2.0, 0, 1))

    def test_certificate_invariants(self):
        from hyplab.regions import ThicknessCertificate

        with pytest.raises(ValueError):
            ThicknessCertificate(1.0, 0.5, {}, 0.1, "certified-on-grid")
        with pytest.raises(ValueError):
            ThicknessCertificate(1.0, 0.5, {}, 0.1, "refuted")
