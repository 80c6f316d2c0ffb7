#!/usr/bin/env python3
"""The dyadic rectangle covering and its charts.

Every point lies in one to four rectangles; each rectangle carries an
inscribed geodesic ball of a radius fixed by the scale parameter, and an
affine chart onto a reference rectangle that leaves the hyperbolic
Laplacian untouched.
"""

import numpy as np

from hyplab import (
    ChartMap,
    DyadicRectangle,
    HalfPlanePoint,
    chart_pushforward_check,
    euclidean_image,
    inscribed_ball,
    locate,
    rect_extents,
)
from hyplab.covering import inscribed_radius, multiplicity_bound

print("== the rectangles ==")
for j, k in ((0, 0), (1, 2), (-1, 5)):
    rect = DyadicRectangle(j, k)
    print(f"rectangle (j={j}, k={k}):", rect_extents(rect))

print("\n== locating a point ==")
z = HalfPlanePoint(0.7, 1.2)
hits = locate(z)
print(f"{(z.x, z.y)} lies in", [(r.j, r.k) for r in hits],
      f" (multiplicity bound {multiplicity_bound()})")

print("\n== multiplicity over a random sample ==")
rng = np.random.default_rng(0)
counts = []
for _ in range(5000):
    w = HalfPlanePoint(float(rng.uniform(-100, 100)), float(np.exp(rng.uniform(-7, 7))))
    counts.append(len(locate(w)))
print("observed multiplicities:", sorted(set(counts)), " never zero, never above the bound")

print("\n== inscribed balls ==")
print("inscribed radius at scale parameter 1: artanh(1/2) =", inscribed_radius(1.0))
ball = inscribed_ball(DyadicRectangle(0, 0))
center, radius = euclidean_image(ball)
print(f"its Euclidean image: center ({center.x}, {center.y}), radius {radius}",
      "-- tangent to the rectangle's walls")

print("\n== charts preserve the change-of-variables identity ==")
check = chart_pushforward_check(lambda X, Y: 1.0 + 0.2 * X + 0.1 * Y, 3, -5)
print("reference-side integral:", check.reference)
print("pushforward integral:   ", check.pushforward, " (equal, exactly)")
print("hyperbolic-weight ratio:", check.hyperbolic / check.reference,
      " (inside [(2/3)^2, 2^2])")

print("\n== the chart is just an affine map ==")
chart = ChartMap(1, 2)
print("chart (1,2) sends (4, 2) to", chart.forward(HalfPlanePoint(4.0, 2.0)))
