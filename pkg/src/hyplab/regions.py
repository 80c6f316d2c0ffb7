"""Observation sets and their thickness.

A Region is a finite union of primitive shapes, optionally replicated over
a horizontal period and a ladder of scales (so thick sets built from one
motif repeated at every dyadic level stay cheap to query), optionally
complemented. Masses of region-ball and region-rectangle intersections
are computed by measuring 1-D sections whose endpoints are refined by
bisection, which keeps indicator integrands out of the 2-D quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .covering import DyadicRectangle
from .geometry import (
    GeodesicBall,
    HalfPlanePoint,
    ball_volume,
    geodesic_distance,
    polar_coordinates_xy,
    radial_cutoff,
)
from .parallel import parallel_map
from .quadrature import DEFAULT_QUAD, QuadratureError, QuadratureSpec, gauss_legendre_doubling, integrate_1d

REGION_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class EuclideanRect:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("rectangle extents must be non-empty")
        if self.y_min < 0:
            raise ValueError("rectangle must sit in y >= 0")


@dataclass(frozen=True)
class EuclideanDisc:
    center_x: float
    center_y: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disc radius must be positive")


@dataclass(frozen=True)
class VerticalStrip:
    """All points with x between the bounds; bounds may be infinite."""

    x_min: float
    x_max: float

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("strip bounds must be increasing")


@dataclass(frozen=True)
class Replication:
    """Horizontal period and scale ladder applied to every primitive.

    Level j scales a primitive by scale_ratio**j and repeats it with
    x-period scale_ratio**j * period_x, so the lattice of copies is
    adapted to the scaling isometries.
    """

    period_x: float
    scale_ratio: float
    j_min: int
    j_max: int

    def __post_init__(self):
        if not self.period_x > 0:
            raise ValueError("replication period must be positive")
        if not self.scale_ratio > 1:
            raise ValueError("scale_ratio must exceed 1")
        if self.j_min > self.j_max:
            raise ValueError("empty scale range")


def _rect_mask(prim: EuclideanRect, x, y, a, period):
    mask = (a * prim.y_min < y) & (y < a * prim.y_max)
    if period is None:
        return mask & (a * prim.x_min < x) & (x < a * prim.x_max)
    big_p = a * period
    width = a * (prim.x_max - prim.x_min)
    if width >= big_p:
        return mask
    rel = np.mod(x - a * prim.x_min, big_p)
    return mask & (rel > 0) & (rel < width)


def _strip_mask(prim: VerticalStrip, x, y, a, period):
    if period is None:
        return (a * prim.x_min < x) & (x < a * prim.x_max)
    big_p = a * period
    width = a * (prim.x_max - prim.x_min)
    if width >= big_p:
        return np.ones_like(x, dtype=bool)
    rel = np.mod(x - a * prim.x_min, big_p)
    return (rel > 0) & (rel < width)


def _disc_mask(prim: EuclideanDisc, x, y, a, period):
    cy = a * prim.center_y
    r = a * prim.radius
    mask = np.zeros_like(x, dtype=bool)
    near_y = np.abs(y - cy) < r
    if not np.any(near_y):
        return mask
    if period is None:
        offsets = [0.0]
        m0 = np.zeros_like(x)
        big_p = 0.0
    else:
        big_p = a * period
        m0 = np.round((x - a * prim.center_x) / big_p)
        offsets = [-1.0, 0.0, 1.0]
    for off in offsets:
        cx = a * prim.center_x + big_p * (m0 + off)
        mask |= (x - cx) ** 2 + (y - cy) ** 2 < r * r
    return mask


def _ball_mask(prim: GeodesicBall, x, y, a, period):
    cy = a * prim.center.y
    thresh = math.cosh(prim.radius) - 1.0
    if period is None:
        offsets = [0.0]
        m0 = np.zeros_like(x)
        big_p = 0.0
    else:
        big_p = a * period
        m0 = np.round((x - a * prim.center.x) / big_p)
        offsets = [-1.0, 0.0, 1.0]
    mask = np.zeros_like(x, dtype=bool)
    for off in offsets:
        cx = a * prim.center.x + big_p * (m0 + off)
        q = ((x - cx) ** 2 + (y - cy) ** 2) / (2.0 * y * cy)
        mask |= q < thresh
    return mask


def _primitive_y_range(prim, a):
    if isinstance(prim, EuclideanRect):
        return a * prim.y_min, a * prim.y_max
    if isinstance(prim, EuclideanDisc):
        return a * (prim.center_y - prim.radius), a * (prim.center_y + prim.radius)
    if isinstance(prim, GeodesicBall):
        cy = a * prim.center.y
        return cy * math.exp(-prim.radius), cy * math.exp(prim.radius)
    return 0.0, math.inf


_MASKS = {
    EuclideanRect: _rect_mask,
    EuclideanDisc: _disc_mask,
    VerticalStrip: _strip_mask,
    GeodesicBall: _ball_mask,
}


@dataclass(frozen=True)
class Region:
    """Union of primitives, optionally replicated, optionally complemented.

    Membership is strict at primitive boundaries; boundaries have measure
    zero so either convention would give the same masses.
    """

    primitives: tuple = ()
    replication: Optional[Replication] = None
    complement: bool = False

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))
        for prim in self.primitives:
            if type(prim) not in _MASKS:
                raise TypeError(f"unsupported primitive {type(prim).__name__}")
            if self.replication is not None and isinstance(prim, VerticalStrip):
                if not (np.isfinite(prim.x_min) and np.isfinite(prim.x_max)):
                    raise ValueError("replicated strips need finite bounds")

    @classmethod
    def full(cls) -> "Region":
        return cls(primitives=(), complement=True)

    @classmethod
    def empty(cls) -> "Region":
        return cls(primitives=())

    def contains_xy(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        mask = np.zeros(x.shape, dtype=bool)
        if self.replication is None:
            scales = [1.0]
            period = None
        else:
            scales = [self.replication.scale_ratio**j
                      for j in range(self.replication.j_min, self.replication.j_max + 1)]
            period = self.replication.period_x
        if x.size and self.primitives:
            y_lo, y_hi = float(np.min(y)), float(np.max(y))
            for a in scales:
                for prim in self.primitives:
                    p_lo, p_hi = _primitive_y_range(prim, a)
                    if p_hi < y_lo or p_lo > y_hi:
                        continue
                    mask |= _MASKS[type(prim)](prim, x, y, a, period)
        if self.complement:
            mask = ~mask
        return mask

    def contains(self, z: HalfPlanePoint) -> bool:
        return bool(self.contains_xy(np.array([z.x]), np.array([z.y]))[0])

    def bounding_geodesic_radius(self, base: HalfPlanePoint):
        """Radius about base enclosing the region, or None if unbounded."""
        if self.complement or self.replication is not None:
            return None
        r_max = 0.0
        for prim in self.primitives:
            if isinstance(prim, VerticalStrip):
                return None
            if isinstance(prim, EuclideanRect):
                if prim.y_min <= 0:
                    return None
                corners = [
                    HalfPlanePoint(cx, cy)
                    for cx in (prim.x_min, prim.x_max)
                    for cy in (prim.y_min, prim.y_max)
                ]
                r_max = max(r_max, max(geodesic_distance(base, c) for c in corners))
            elif isinstance(prim, EuclideanDisc):
                if prim.center_y - prim.radius <= 0:
                    return None
                h = math.sqrt(prim.center_y**2 - prim.radius**2)
                hyp_radius = math.atanh(prim.radius / prim.center_y)
                center = HalfPlanePoint(prim.center_x, h)
                r_max = max(r_max, geodesic_distance(base, center) + hyp_radius)
            elif isinstance(prim, GeodesicBall):
                r_max = max(r_max, geodesic_distance(base, prim.center) + prim.radius)
        return r_max


def membership(region: Region, z: HalfPlanePoint) -> bool:
    """Deterministic indicator of the region."""
    return region.contains(z)


def _measure_sections(indicator, length, n0=256, max_doublings=6, wrap=False, stable_tol=1e-10):
    """Measure of {t in (0, length): indicator(t)} plus the inside intervals.

    indicator maps a float array to booleans; transition points between
    samples are sharpened by bisection. Sampling is doubled until the
    measure moves by less than stable_tol * max(length, 1), which also
    guards against features narrower than the initial grid (features
    below the final resolution contribute at most the tolerance).
    """
    n = n0
    prev = None
    for _ in range(max_doublings):
        ts = (np.arange(n) + 0.5) * (length / n)
        inside = indicator(ts)
        if inside.all():
            intervals = [(0.0, length)]
            measure = length
        elif not inside.any():
            intervals = []
            measure = 0.0
        elif wrap:
            flips = np.nonzero(inside != np.roll(inside, -1))[0]
            lo = ts[flips]
            hi = np.where(flips == n - 1, ts[0] + length, ts[(flips + 1) % n])
            cuts = _bisect_flips(indicator, lo, hi, length, wrap=True)
            intervals, measure = _arcs_from_cuts(indicator, cuts, length)
        else:
            intervals, measure = _line_intervals(indicator, ts, inside, length)
        if prev is not None and abs(measure - prev) <= stable_tol * max(length, 1.0):
            return measure, intervals
        prev = measure
        n *= 2
    raise QuadratureError(
        f"section measure did not stabilize (last {measure!r})",
        best_estimate=measure,
        error_bound=abs(measure - prev) if prev is not None else None,
    )


def _bisect_flips(indicator, lo, hi, length, wrap=False, iters=45):
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if lo.size == 0:
        return lo
    state_lo = indicator(np.mod(lo, length) if wrap else lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        state_mid = indicator(np.mod(mid, length) if wrap else mid)
        same = state_mid == state_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _arcs_from_cuts(indicator, cuts, length):
    cuts = np.sort(np.mod(cuts, length))
    arcs = []
    measure = 0.0
    bounds = np.concatenate((cuts, [cuts[0] + length]))
    for a, b in zip(bounds[:-1], bounds[1:]):
        mid = np.array([np.mod(0.5 * (a + b), length)])
        if indicator(mid)[0]:
            arcs.append((a, b))
            measure += b - a
    return arcs, measure


def _line_intervals(indicator, ts, inside, length):
    flips = np.nonzero(inside[:-1] != inside[1:])[0]
    cuts = _bisect_flips(indicator, ts[flips], ts[flips + 1], length)
    bounds = np.concatenate(([0.0], np.sort(cuts), [length]))
    intervals = []
    measure = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        if b <= a:
            continue
        mid = np.array([0.5 * (a + b)])
        if indicator(mid)[0]:
            intervals.append((a, b))
            measure += b - a
    return intervals, measure


def _ring_arcs(region: Region, base: HalfPlanePoint, r: float, stable_tol=1e-10):
    """Angular sections of the region on the circle of geodesic radius r."""

    def indicator(theta):
        x, y = polar_coordinates_xy(base, r, theta)
        return region.contains_xy(x, y)

    measure, arcs = _measure_sections(indicator, 2.0 * math.pi, wrap=True, stable_tol=stable_tol)
    return measure, arcs


def _section_tol(quad: QuadratureSpec) -> float:
    # angular features narrower than this fraction of the section are
    # allowed to drift between refinements; tied to the requested accuracy
    return float(np.clip(0.01 * quad.rel_tol, 1e-12, 1e-8))


def ball_mass(region: Region, ball: GeodesicBall, quad: QuadratureSpec = DEFAULT_QUAD, rng=None):
    """Riemannian measure of the region-ball intersection.

    Tolerances of 1e-7 and looser run on a vectorized radial grid whose
    resolution doubles until the mass stabilizes (the fast path for
    thickness scans over many-kink regions); tighter tolerances use
    adaptive quadrature over exact ring sections. With quad.mc_samples
    > 0 and a generator supplied, a Monte-Carlo estimate replaces both
    (useful as an independent cross-check for awkward boundaries).
    """
    if rng is not None and quad.mc_samples > 0:
        estimate, _ = monte_carlo_ball_mass(region, ball, quad.mc_samples, rng)
        return estimate
    if quad.rel_tol >= 1e-7:
        return _ball_mass_grid(region, ball, quad)
    tol = _section_tol(quad)

    def ring_measure(r):
        if r <= 0.0:
            return 0.0
        measure, _ = _ring_arcs(region, ball.center, r, stable_tol=tol)
        return measure * math.sinh(r)

    value, _ = integrate_1d(ring_measure, 0.0, ball.radius, quad)
    return float(min(max(value, 0.0), ball_volume(ball.radius)))


def _simpson(values: np.ndarray, xs: np.ndarray) -> float:
    h = xs[1] - xs[0]
    w = np.ones(len(xs))
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(np.sum(w * values) * h / 3.0)


def _ball_mass_grid(region: Region, ball: GeodesicBall, quad: QuadratureSpec):
    # Simpson over an even number of panels, doubled until two levels
    # agree; kinks in the ring measure degrade the order locally, which
    # the pairwise comparison absorbs
    n = 256 * max(1, int(ball.radius / 8.0) + 1)
    prev = None
    for _ in range(7):
        rs = np.linspace(0.0, ball.radius, n + 1)
        mu = ring_measure_profile(region, ball.center, rs)
        value = _simpson(mu * np.sinh(rs), rs)
        if prev is not None and abs(value - prev) <= quad.tolerance_for(value):
            return float(min(max(value, 0.0), ball_volume(ball.radius)))
        prev = value
        n *= 2
    raise QuadratureError(
        f"ball mass did not stabilize on the radial grid (last {value!r})",
        best_estimate=value,
        error_bound=abs(value - prev),
    )


def ring_measure_profile(region: Region, base: HalfPlanePoint, rs, n_theta: int = 2048,
                         iters: int = 30, chunk: int = 256) -> np.ndarray:
    """Angular measure of the region on rings of radii rs, vectorized.

    Samples every ring at n_theta angles at once, then sharpens all
    inside/outside transitions of all rings with one batched bisection.
    Arcs narrower than 2 pi / n_theta can be missed; pick n_theta
    accordingly.
    """
    rs = np.asarray(rs, dtype=float)
    two_pi = 2.0 * math.pi
    dtheta = two_pi / n_theta
    theta = (np.arange(n_theta) + 0.5) * dtheta
    out = np.empty(rs.shape)
    for start in range(0, len(rs), chunk):
        rblock = rs[start : start + chunk]
        x, y = polar_coordinates_xy(base, rblock[:, None], theta[None, :])
        inside = region.contains_xy(x, y)
        measures = inside.mean(axis=1) * two_pi
        flips = inside != np.roll(inside, -1, axis=1)
        rows, cols = np.nonzero(flips)
        if rows.size:
            lo = theta[cols]
            hi = np.where(cols == n_theta - 1, theta[0] + two_pi, theta[(cols + 1) % n_theta])
            r_flip = rblock[rows]
            state_lo = inside[rows, cols]
            for _ in range(iters):
                mid = 0.5 * (lo + hi)
                xm, ym = polar_coordinates_xy(base, r_flip, np.mod(mid, two_pi))
                same = region.contains_xy(xm, ym) == state_lo
                lo = np.where(same, mid, lo)
                hi = np.where(same, hi, mid)
            cuts = 0.5 * (lo + hi)
            # the coarse count treats each sample's cell as fully inside or
            # outside; shift every crossing from its cell edge to the cut
            edges = theta[cols] + 0.5 * dtheta
            corrections = np.where(state_lo, cuts - edges, edges - cuts)
            np.add.at(measures, rows, corrections)
        out[start : start + chunk] = np.clip(measures, 0.0, two_pi)
    if len(rs) and rs[0] == 0.0:
        out[0] = two_pi if region.contains(base) else 0.0
    return out


def monte_carlo_ball_mass(region: Region, ball: GeodesicBall, n: int, rng):
    """Monte-Carlo mass estimate with its standard error.

    Samples are exactly dvol-uniform on the ball: cosh r is uniform on
    [1, cosh R] and the angle is uniform.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    u = rng.random(n)
    theta = 2.0 * math.pi * rng.random(n)
    r = np.arccosh(1.0 + u * (math.cosh(ball.radius) - 1.0))
    x, y = polar_coordinates_xy(ball.center, r, theta)
    inside = region.contains_xy(x, y)
    vol = ball_volume(ball.radius)
    p = float(np.mean(inside))
    stderr = vol * math.sqrt(max(p * (1.0 - p), 1e-12) / n)
    return vol * p, stderr


def rect_mass(region: Region, rect: DyadicRectangle, quad: QuadratureSpec = DEFAULT_QUAD):
    """Riemannian measure of the region-rectangle intersection."""
    (x0, x1), (y0, y1) = rect.extents()
    tol = _section_tol(quad)

    def row_length(y):
        def indicator(ts):
            xs = x0 + ts
            return region.contains_xy(xs, np.full_like(xs, y))

        measure, _ = _measure_sections(indicator, x1 - x0, stable_tol=tol)
        return measure / (y * y)

    value, _ = integrate_1d(row_length, y0, y1, quad)
    vol = (x1 - x0) * (1.0 / y0 - 1.0 / y1)
    return float(min(max(value, 0.0), vol))


def region_integral(f_xy, region: Region, quad: QuadratureSpec = DEFAULT_QUAD,
                    base_point=None, envelope=None, r_cut=None):
    """Integral of f dvol over the region.

    Bounded regions pick their own truncation radius; unbounded ones
    need base_point plus a radial decay envelope for f (or an explicit
    r_cut).
    """
    base = base_point or HalfPlanePoint(0.0, 1.0)
    if r_cut is None:
        r_cut = region.bounding_geodesic_radius(base)
        if r_cut is None:
            if envelope is None:
                raise ValueError("unbounded region: supply a decay envelope or r_cut")
            r_cut = radial_cutoff(envelope, quad.tail_tol)
    if r_cut == 0.0:
        return 0.0
    tol = _section_tol(quad)

    def ring(r):
        if r <= 0.0:
            return 0.0
        _, arcs = _ring_arcs(region, base, r, stable_tol=tol)
        total = 0.0
        for a, b in arcs:
            def seg(theta):
                x, y = polar_coordinates_xy(base, r, np.mod(theta, 2.0 * math.pi))
                return f_xy(x, y)

            part, _ = gauss_legendre_doubling(seg, a, b, quad, n0=16)
            total += float(part)
        return total * math.sinh(r)

    value, _ = integrate_1d(ring, 0.0, r_cut, quad)
    return float(value)


@dataclass(frozen=True)
class ThicknessCertificate:
    """Grid-based thickness verdict.

    certified-on-grid means every tested center had mass at least delta;
    it is explicitly a statement about the grid, not all of the plane.
    A refutation is exact: the witness mass was computed, not interpolated.
    """

    R: float
    delta: float
    grid: dict
    min_mass: float
    mode: str
    witness: Optional[HalfPlanePoint] = None
    argmin: Optional[HalfPlanePoint] = None
    failed_nodes: tuple = ()

    def __post_init__(self):
        if self.mode not in ("certified-on-grid", "refuted"):
            raise ValueError(f"unknown certificate mode {self.mode!r}")
        if self.mode == "certified-on-grid" and not self.min_mass >= self.delta:
            raise ValueError("certified certificate with min_mass < delta")
        if self.mode == "refuted" and self.witness is None:
            raise ValueError("refutation needs a witness")


def thickness_grid(window, grid_step: float):
    """Centers uniform in (x/y, log y) over the window.

    window = (slope_range, logheight_range); the grid coordinates are
    adapted to the scaling/translation isometries.
    """
    (u0, u1), (v0, v1) = window
    if not grid_step > 0:
        raise ValueError("grid_step must be positive")
    us = np.arange(u0, u1 + 0.5 * grid_step, grid_step)
    vs = np.arange(v0, v1 + 0.5 * grid_step, grid_step)
    centers = []
    for v in vs:
        y = math.exp(v)
        for u in us:
            centers.append(HalfPlanePoint(u * y, y))
    return centers


def thickness_scan(region: Region, R: float, delta: float, window, grid_step: float,
                   quad: QuadratureSpec = DEFAULT_QUAD) -> ThicknessCertificate:
    """Scan ball masses over a hyperbolic-uniform grid of centers."""
    if not R > 0 or not delta > 0:
        raise ValueError("R and delta must be positive")
    centers = thickness_grid(window, grid_step)

    def node_mass(center):
        try:
            return ball_mass(region, GeodesicBall(center, R), quad), None
        except QuadratureError as exc:
            return None, exc

    results = parallel_map(node_mass, centers)
    masses = []
    failed = []
    for center, (mass, exc) in zip(centers, results):
        if exc is None:
            masses.append((mass, center))
        else:
            failed.append((center, str(exc)))
    if not masses:
        raise QuadratureError("every grid node failed to converge")
    min_mass, argmin = min(masses, key=lambda mc: mc[0])
    grid = {
        "slope_range": (window[0][0], window[0][1]),
        "logheight_range": (window[1][0], window[1][1]),
        "step": grid_step,
        "nodes": len(centers),
        "failed": len(failed),
    }
    if min_mass < delta:
        return ThicknessCertificate(R, delta, grid, min_mass, "refuted",
                                    witness=argmin, argmin=argmin, failed_nodes=tuple(failed))
    return ThicknessCertificate(R, delta, grid, min_mass, "certified-on-grid",
                                argmin=argmin, failed_nodes=tuple(failed))


def rect_thickness_scan(region: Region, scale_rp: float, j_range, k_range,
                        quad: QuadratureSpec = DEFAULT_QUAD):
    """Minimum rectangle mass over an index window, with the argmin.

    When a ball-thickness scan certifies (delta, R) with R matched to the
    rectangle scale through the tanh relation, this minimum is at least
    delta on rectangles whose inscribed balls were scanned.
    """
    rects = [DyadicRectangle(j, k, scale_rp) for j in j_range for k in k_range]
    if not rects:
        raise ValueError("empty index window")
    masses = parallel_map(lambda rect: rect_mass(region, rect, quad), rects)
    idx = int(np.argmin(masses))
    return masses[idx], rects[idx]


def _primitive_to_dict(prim):
    if isinstance(prim, EuclideanRect):
        return {"type": "euclidean_rect", "x_min": prim.x_min, "x_max": prim.x_max,
                "y_min": prim.y_min, "y_max": prim.y_max}
    if isinstance(prim, EuclideanDisc):
        return {"type": "euclidean_disc", "center_x": prim.center_x,
                "center_y": prim.center_y, "radius": prim.radius}
    if isinstance(prim, VerticalStrip):
        return {"type": "vertical_strip",
                "x_min": None if not np.isfinite(prim.x_min) else prim.x_min,
                "x_max": None if not np.isfinite(prim.x_max) else prim.x_max}
    if isinstance(prim, GeodesicBall):
        return {"type": "geodesic_ball", "center_x": prim.center.x,
                "center_y": prim.center.y, "radius": prim.radius}
    raise TypeError(f"unsupported primitive {type(prim).__name__}")


def _primitive_from_dict(d):
    kind = d.get("type")
    if kind == "euclidean_rect":
        return EuclideanRect(d["x_min"], d["x_max"], d["y_min"], d["y_max"])
    if kind == "euclidean_disc":
        return EuclideanDisc(d["center_x"], d["center_y"], d["radius"])
    if kind == "vertical_strip":
        x_min = d["x_min"] if d["x_min"] is not None else -math.inf
        x_max = d["x_max"] if d["x_max"] is not None else math.inf
        return VerticalStrip(x_min, x_max)
    if kind == "geodesic_ball":
        return GeodesicBall(HalfPlanePoint(d["center_x"], d["center_y"]), d["radius"])
    raise ValueError(f"unknown primitive type {kind!r}")


def region_to_dict(region: Region) -> dict:
    d = {
        "version": REGION_SCHEMA_VERSION,
        "complement": region.complement,
        "primitives": [_primitive_to_dict(p) for p in region.primitives],
        "replication": None,
    }
    if region.replication is not None:
        rep = region.replication
        d["replication"] = {"period_x": rep.period_x, "scale_ratio": rep.scale_ratio,
                            "j_min": rep.j_min, "j_max": rep.j_max}
    return d


def region_from_dict(d: dict) -> Region:
    version = d.get("version")
    if version != REGION_SCHEMA_VERSION:
        raise ValueError(
            f"unsupported region schema version {version!r} "
            f"(this build reads version {REGION_SCHEMA_VERSION})")
    replication = None
    if d.get("replication"):
        rep = d["replication"]
        replication = Replication(rep["period_x"], rep["scale_ratio"], rep["j_min"], rep["j_max"])
    return Region(
        primitives=tuple(_primitive_from_dict(p) for p in d.get("primitives", [])),
        replication=replication,
        complement=bool(d.get("complement", False)),
    )


def save_region(path, region: Region):
    with open(path, "w") as fh:
        json.dump(region_to_dict(region), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_region(path) -> Region:
    with open(path) as fh:
        return region_from_dict(json.load(fh))
