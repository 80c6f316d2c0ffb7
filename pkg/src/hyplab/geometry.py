"""Hyperbolic half-plane primitives.

Points live in {(x, y), y > 0} with length element (dx^2 + dy^2)/y^2 and
volume element dx dy / y^2. Distances, balls, volumes, the
scaling/translation isometries and Riemannian integration all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import (
    DEFAULT_QUAD,
    QuadratureError,
    QuadratureSpec,
    gauss_legendre_doubling,
    integrate_1d,
)


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point (x, y) of the open upper half-plane; y > 0 is enforced."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"half-plane point needs y > 0, got y={self.y}")


@dataclass(frozen=True)
class GeodesicBall:
    """Metric ball of positive radius around a half-plane point."""

    center: HalfPlanePoint
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")


def geodesic_distance_xy(x1, y1, x2, y2):
    """Vectorized geodesic distance between coordinate arrays."""
    q = ((np.asarray(x1) - x2) ** 2 + (np.asarray(y1) - y2) ** 2) / (2.0 * np.asarray(y1) * y2)
    q = np.asarray(q)
    # acosh(1+q) loses relative accuracy for q near 0; switch to its series
    # sqrt(2q)(1 - q/12 + 3q^2/160) below q = 1e-8.
    small = q < 1e-8
    safe = np.where(small, 1.0, q)
    out = np.where(
        small,
        np.sqrt(2.0 * q) * (1.0 - q / 12.0 + 3.0 * q * q / 160.0),
        np.arccosh(1.0 + safe),
    )
    return out if out.shape else float(out)


def geodesic_distance(z1: HalfPlanePoint, z2: HalfPlanePoint) -> float:
    """Geodesic distance between two points."""
    return float(geodesic_distance_xy(z1.x, z1.y, z2.x, z2.y))


def euclidean_image(ball: GeodesicBall):
    """Euclidean disc identical to the geodesic ball.

    The ball of radius r around (x, y) is the Euclidean disc of center
    (x, y cosh r) and radius y sinh r. Returns (center_point, radius).
    """
    c, r = ball.center, ball.radius
    return HalfPlanePoint(c.x, c.y * math.cosh(r)), c.y * math.sinh(r)


def ball_volume(radius: float) -> float:
    """Volume of a geodesic ball: 2 pi (cosh R - 1), any center."""
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    # 4 pi sinh^2(R/2) equals 2 pi (cosh R - 1) without small-R cancellation.
    return 4.0 * math.pi * math.sinh(0.5 * radius) ** 2


def apply_isometry(z: HalfPlanePoint, scale: float, shift: float) -> HalfPlanePoint:
    """The isometry (x, y) -> (scale*x + shift, scale*y), scale > 0."""
    if not scale > 0:
        raise ValueError(f"isometry scale must be positive, got {scale}")
    return HalfPlanePoint(scale * z.x + shift, scale * z.y)


def normalizing_isometry(z: HalfPlanePoint):
    """(scale, shift) of the isometry sending z to (0, 1)."""
    return 1.0 / z.y, -z.x / z.y


def polar_coordinates_xy(base: HalfPlanePoint, r, theta):
    """Point at geodesic distance r, direction theta, from base (vectorized).

    theta = 0 points straight up; the area element in these coordinates is
    sinh(r) dr dtheta. Evaluated through the disc model so it stays stable
    for r up to several hundred.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    # t = tanh(r/2), with 1 - t = 2/(e^r + 1) kept as its own quantity.
    one_minus_t = 2.0 / (np.exp(r) + 1.0)
    t = 1.0 - one_minus_t
    denom = one_minus_t**2 + 4.0 * t * np.sin(0.5 * theta) ** 2
    x = base.x - base.y * 2.0 * t * np.sin(theta) / denom
    y = base.y * one_minus_t * (2.0 - one_minus_t) / denom
    return x, y


def _ball_integral(f_xy, ball: GeodesicBall, quad: QuadratureSpec):
    """Integral of f dvol over a ball, in geodesic polar coordinates."""

    def ring(r):
        def ring_f(theta):
            x, y = polar_coordinates_xy(ball.center, r, theta)
            return f_xy(x, y)

        value, _ = gauss_legendre_doubling(ring_f, 0.0, 2.0 * math.pi, quad)
        return value * math.sinh(r)

    return integrate_1d(ring, 0.0, ball.radius, quad)


def _rect_integral(f_xy, rect, quad: QuadratureSpec):
    """Integral of f dvol over a dyadic rectangle (tensor quadrature)."""
    (x0, x1), (y0, y1) = rect.extents()

    def row(y):
        value, _ = gauss_legendre_doubling(lambda x: f_xy(x, np.full_like(x, y)), x0, x1, quad)
        return value / (y * y)

    return integrate_1d(row, y0, y1, quad)


def radial_cutoff(envelope, tail_tol: float, r_start: float = 4.0, r_max: float = 400.0):
    """Smallest radius beyond which the enveloped dvol-tail is below tail_tol.

    envelope(r) must bound |f| at geodesic distance r from the base point;
    the tail mass is estimated with the exact ring weight 2 pi sinh r.
    """
    r = r_start
    while r < r_max:
        tail, _ = gauss_legendre_doubling(
            lambda s: 2.0 * math.pi * envelope(s) * np.sinh(s), r, r + 40.0, DEFAULT_QUAD, n0=64
        )
        far, _ = gauss_legendre_doubling(
            lambda s: 2.0 * math.pi * envelope(s) * np.sinh(s), r + 40.0, r + 80.0, DEFAULT_QUAD, n0=64
        )
        if tail + far < tail_tol:
            return r
        r *= 1.5
    raise QuadratureError(
        f"decay envelope tail stays above {tail_tol!r} out to r={r_max}",
        best_estimate=None,
        error_bound=None,
    )


def riemannian_integral(f_xy, domain, quad=DEFAULT_QUAD, base_point=None, envelope=None):
    """Integral of f against dx dy / y^2 over the domain.

    f_xy must accept coordinate arrays. The domain may be a GeodesicBall,
    a covering rectangle, or a region (anything with contains_xy); regions
    of infinite measure require a base point and a radial decay envelope
    for f so the integral can be truncated at a certified radius.
    """
    if isinstance(domain, GeodesicBall):
        value, err = _ball_integral(f_xy, domain, quad)
        return value

    if hasattr(domain, "extents"):
        value, err = _rect_integral(f_xy, domain, quad)
        return value

    if hasattr(domain, "contains_xy"):
        from .regions import region_integral

        return region_integral(f_xy, domain, quad, base_point=base_point, envelope=envelope)

    raise TypeError(f"unsupported integration domain: {type(domain).__name__}")
