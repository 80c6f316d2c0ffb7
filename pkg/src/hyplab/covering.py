"""Dyadic rectangle covering of the half-plane and its charts.

The covering at scale parameter Rp tiles {y > 0} with open rectangles
indexed by (j, k); each rectangle carries an inscribed geodesic ball whose
radius is tied to Rp through tanh(R) = min(1 - 2^-Rp, (3/2)^Rp - 1), and a
chart that maps it onto a fixed reference rectangle while preserving the
hyperbolic Laplacian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import GeodesicBall, HalfPlanePoint
from .quadrature import DEFAULT_QUAD, gauss_legendre_doubling

import numpy as np

LOG2_3 = math.log2(3.0)


@dataclass(frozen=True)
class DyadicRectangle:
    """Covering rectangle: x in (b(k-1), b(k+1)), y in (b/2^Rp, b(3/2)^Rp)
    with b = 2^(Rp j). Extents are always derived from (j, k, scale_rp)."""

    j: int
    k: int
    scale_rp: float = 1.0

    def __post_init__(self):
        if not self.scale_rp > 0:
            raise ValueError(f"scale parameter must be positive, got {self.scale_rp}")

    def extents(self):
        b = 2.0 ** (self.scale_rp * self.j)
        x0 = b * (self.k - 1)
        x1 = b * (self.k + 1)
        y0 = b * 2.0 ** (-self.scale_rp)
        y1 = b * 1.5**self.scale_rp
        return (x0, x1), (y0, y1)

    def contains(self, z: HalfPlanePoint) -> bool:
        (x0, x1), (y0, y1) = self.extents()
        return x0 < z.x < x1 and y0 < z.y < y1


def rect_extents(rect: DyadicRectangle):
    """Open x- and y-intervals of the rectangle."""
    return rect.extents()


def locate(z: HalfPlanePoint, scale_rp: float = 1.0):
    """All covering rectangles containing z.

    The y-constraint confines j to a window of width log2(3) (so one or
    two values); for each admissible j the x-constraint leaves one or two
    k values. The result is non-empty for every z and never longer than 4.
    """
    rp = float(scale_rp)
    if not rp > 0:
        raise ValueError(f"scale parameter must be positive, got {scale_rp}")
    t = math.log2(z.y) / rp + 1.0
    j_lo = math.floor(t - LOG2_3) - 1
    j_hi = math.ceil(t) + 1
    hits = []
    for j in range(j_lo, j_hi + 1):
        b = 2.0 ** (rp * j)
        k_center = z.x / b
        for k in range(math.floor(k_center) - 1, math.floor(k_center) + 2):
            rect = DyadicRectangle(j, k, rp)
            if rect.contains(z):
                hits.append(rect)
    return hits


def multiplicity_bound(scale_rp: float = 1.0) -> int:
    """Upper bound N on the covering multiplicity, valid for every point."""
    # j-window of width log2(3) < 2 admits at most 2 scales; the open
    # x-interval of width 2 admits at most 2 offsets per scale.
    return 4


def inscribed_radius(scale_rp: float = 1.0) -> float:
    """Radius R with tanh(R) = min(1 - 2^-Rp, (3/2)^Rp - 1)."""
    rp = float(scale_rp)
    if not rp > 0:
        raise ValueError(f"scale parameter must be positive, got {scale_rp}")
    m = min(1.0 - 2.0 ** (-rp), 1.5**rp - 1.0)
    return math.atanh(m)


def inscribed_ball(rect: DyadicRectangle) -> GeodesicBall:
    """Geodesic ball contained in the rectangle.

    Center (b k, b / cosh R) and radius R from the tanh relation; its
    Euclidean image has center height exactly b and radius b tanh R,
    which fits the extents with at most boundary tangency.
    """
    radius = inscribed_radius(rect.scale_rp)
    b = 2.0 ** (rect.scale_rp * rect.j)
    center = HalfPlanePoint(b * rect.k, b / math.cosh(radius))
    return GeodesicBall(center, radius)


@dataclass(frozen=True)
class ChartMap:
    """Affine chart (X, Y) = (x / b - k, y / b), b = 2^(Rp j).

    Maps the (j, k) rectangle onto the reference rectangle
    (-1, 1) x (2^-Rp, (3/2)^Rp) and commutes with the hyperbolic
    Laplacian: Y^2 (dXX + dYY) pulled back equals y^2 (dxx + dyy).
    """

    j: int
    k: int
    scale_rp: float = 1.0

    @property
    def base(self) -> float:
        return 2.0 ** (self.scale_rp * self.j)

    def forward(self, z: HalfPlanePoint):
        return z.x / self.base - self.k, z.y / self.base

    def inverse(self, X: float, Y: float) -> HalfPlanePoint:
        if not Y > 0:
            raise ValueError(f"chart inverse needs Y > 0, got Y={Y}")
        return HalfPlanePoint(self.base * (X + self.k), self.base * Y)

    def reference_extents(self):
        return (-1.0, 1.0), (2.0 ** (-self.scale_rp), 1.5**self.scale_rp)


def chart_forward(chart: ChartMap, z: HalfPlanePoint):
    return chart.forward(z)


def chart_inverse(chart: ChartMap, X: float, Y: float) -> HalfPlanePoint:
    return chart.inverse(X, Y)


@dataclass(frozen=True)
class ChartCheck:
    """Both sides of the chart change-of-variables identity.

    reference   = integral of |f|^2 dX dY over the reference rectangle,
    pushforward = integral of b^-2 |f o chart|^2 dx dy over the rectangle
                  (equal to reference, exactly),
    hyperbolic  = integral of |f o chart|^2 dx dy / y^2 over the rectangle,
                  comparable to reference within [(2/3)^2Rp, 2^2Rp].
    """

    reference: float
    pushforward: float
    hyperbolic: float


def chart_pushforward_check(f_XY, j: int, k: int, quad=DEFAULT_QUAD, scale_rp: float = 1.0) -> ChartCheck:
    """Evaluate the chart identity for a reference-coordinates integrand."""
    chart = ChartMap(j, k, scale_rp)
    (X0, X1), (Y0, Y1) = chart.reference_extents()
    b = chart.base

    def ref_row(Y):
        def g(X):
            return np.abs(f_XY(X, np.full_like(X, Y))) ** 2

        value, _ = gauss_legendre_doubling(g, X0, X1, quad)
        return value

    reference, _ = gauss_legendre_doubling(np.vectorize(ref_row), Y0, Y1, quad, n0=64)

    rect = DyadicRectangle(j, k, scale_rp)
    (x0, x1), (y0, y1) = rect.extents()

    def push_row(y):
        def g(x):
            return np.abs(f_XY(x / b - k, np.full_like(x, y / b))) ** 2

        value, _ = gauss_legendre_doubling(g, x0, x1, quad)
        return value

    pushforward_rows = np.vectorize(push_row)
    pushforward, _ = gauss_legendre_doubling(
        lambda y: pushforward_rows(y) / (b * b), y0, y1, quad, n0=64
    )
    hyperbolic, _ = gauss_legendre_doubling(
        lambda y: pushforward_rows(y) / (y * y), y0, y1, quad, n0=64
    )
    return ChartCheck(float(reference), float(pushforward), float(hyperbolic))
