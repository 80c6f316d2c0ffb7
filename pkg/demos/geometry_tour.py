#!/usr/bin/env python3
"""A walk through the half-plane primitives.

Distances, the Euclidean picture of geodesic balls, volumes, the
scaling/translation isometries, and integration against dx dy / y^2.
"""

import math

import numpy as np

from hyplab import (
    GeodesicBall,
    HalfPlanePoint,
    apply_isometry,
    ball_volume,
    euclidean_image,
    geodesic_distance,
    riemannian_integral,
)
from hyplab.geometry import geodesic_distance_xy
from hyplab.regions import Region

print("== distances ==")
i = HalfPlanePoint(0.0, 1.0)
print("d((0,1), (0,e)) =", geodesic_distance(i, HalfPlanePoint(0.0, math.e)),
      " (the vertical line is a geodesic with length element dy/y)")
print("d((0,1), (sinh 1, cosh 1)) =", geodesic_distance(i, HalfPlanePoint(math.sinh(1), math.cosh(1))))

print("\n== geodesic balls are Euclidean discs with a lifted center ==")
ball = GeodesicBall(i, 1.0)
center, radius = euclidean_image(ball)
print(f"unit ball around (0,1): Euclidean center ({center.x}, {center.y:.6f}), radius {radius:.6f}")
print("volume 2 pi (cosh 1 - 1) =", ball_volume(1.0))
print("tiny balls look Euclidean: vol(B_0.01) / (pi 0.01^2) =",
      ball_volume(0.01) / (math.pi * 0.01**2))

print("\n== isometries: x -> a x + b, y -> a y ==")
a, b = 2.5, -7.0
z1, z2 = HalfPlanePoint(0.0, 1.0), HalfPlanePoint(1.0, 1.0)
print("distance before:", geodesic_distance(z1, z2))
print("distance after: ", geodesic_distance(apply_isometry(z1, a, b), apply_isometry(z2, a, b)))

print("\n== integration against dvol = dx dy / y^2 ==")
one = lambda x, y: np.ones_like(x)
print("int_B1 1 dvol =", riemannian_integral(one, ball), " (equals the ball volume)")

gaussian = lambda x, y: np.exp(-geodesic_distance_xy(x, y, 0.0, 1.0) ** 2)
value = riemannian_integral(gaussian, Region.full(), base_point=i,
                            envelope=lambda r: np.exp(-(r**2)))
print("int_plane e^(-d(z,(0,1))^2) dvol =", value)
gaussian7 = lambda x, y: np.exp(-geodesic_distance_xy(x, y, 7.0, 4.0) ** 2)
value7 = riemannian_integral(gaussian7, Region.full(), base_point=HalfPlanePoint(7.0, 4.0),
                             envelope=lambda r: np.exp(-(r**2)))
print("same integral centered at (7,4):  ", value7, " (isometry invariance)")
