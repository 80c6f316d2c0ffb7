"""Explicit heat kernel on the hyperbolic half-plane.

The kernel is a function of time and geodesic distance only,

    H(t, d) = sqrt(2) (4 pi t)^(-3/2) e^(-t/4)
              * int_d^inf  s e^(-s^2/4t) / sqrt(cosh s - cosh d)  ds,

so isometry invariance is structural: point-pair entries compute d first.
The integrand's inverse-square-root endpoint is removed by substituting
s = d + u^2 after factoring cosh s - cosh d = 2 sinh((s+d)/2) sinh((s-d)/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import HalfPlanePoint, geodesic_distance, geodesic_distance_xy, polar_coordinates_xy
from .quadrature import DEFAULT_QUAD, QuadratureSpec, gauss_legendre_doubling, integrate_1d


def envelope_f(t):
    """Auxiliary envelope e^(t/4) t^(3/2) used by the Gaussian bounds."""
    t = np.asarray(t, dtype=float)
    out = np.exp(t / 4.0) * t**1.5
    return out if out.shape else float(out)


def _sinhc(w):
    """sinh(w)/w, stable at w = 0."""
    w = np.asarray(w, dtype=float)
    small = np.abs(w) < 1e-4
    safe = np.where(small, 1.0, w)
    return np.where(small, 1.0 + w * w / 6.0, np.sinh(safe) / safe)


def _mckean_integrand(u, t, d):
    # s = d + u^2; the factor u / sqrt(sinh(u^2/2)) is sqrt(2 / sinhc(u^2/2)).
    u = np.asarray(u, dtype=float)
    s = d + u * u
    w = 0.5 * u * u
    return (
        2.0
        * s
        * np.exp(-s * s / (4.0 * t))
        * np.sqrt(2.0 / _sinhc(w))
        / np.sqrt(2.0 * np.sinh(d + w))
    )


def _upper_limit(t: float, d: float, tail_tol: float) -> float:
    """Integration cutoff in s, doubled until the discarded tail is tiny."""
    s_max = max(d + 1.0, 2.0 * math.sqrt(t * math.log(1.0 / tail_tol)))
    for _ in range(6):
        u_lo = math.sqrt(s_max - d)
        u_hi = math.sqrt(2.0 * s_max - d)
        inc, _ = gauss_legendre_doubling(
            lambda u: _mckean_integrand(u, t, d), u_lo, u_hi, DEFAULT_QUAD, n0=64
        )
        if abs(inc) < tail_tol:
            return s_max
        s_max *= 2.0
    return s_max


def heat_kernel(t: float, d: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Kernel value at time t > 0 and geodesic distance d >= 0."""
    if not t > 0:
        raise ValueError(f"heat kernel needs t > 0, got {t}")
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    s_max = _upper_limit(t, d, quad.tail_tol)
    u_max = math.sqrt(s_max - d)
    value, _ = integrate_1d(lambda u: float(_mckean_integrand(u, t, d)), 0.0, u_max, quad)
    prefactor = math.sqrt(2.0) / (4.0 * math.pi * t) ** 1.5 * math.exp(-t / 4.0)
    return prefactor * value


def heat_kernel_points(t: float, z1: HalfPlanePoint, z2: HalfPlanePoint,
                       quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Kernel between two points; symmetric by construction."""
    return heat_kernel(t, geodesic_distance(z1, z2), quad)


@lru_cache(maxsize=64)
def kernel_profile(t: float, r_max: float, quad: QuadratureSpec = DEFAULT_QUAD, nodes: int = 1200):
    """Cubic-spline radial profile of H(t, .) on [0, r_max].

    Cached; insertion is idempotent so concurrent readers can share it.
    """
    rs = np.linspace(0.0, r_max, nodes)
    values = np.array([heat_kernel(t, float(r), quad) for r in rs])
    return CubicSpline(rs, values)


def kernel_mass(t: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Total mass int H(t, .) dvol; equals 1 for the exact kernel."""
    r_max = t + 2.0 * math.sqrt(t * math.log(1.0 / quad.tail_tol)) + 8.0

    def ring(r):
        return heat_kernel(t, r, quad) * 2.0 * math.pi * math.sinh(r)

    value, _ = integrate_1d(ring, 0.0, r_max, quad)
    return value


def semigroup_residual(t: float, s: float, z1: HalfPlanePoint, z2: HalfPlanePoint,
                       quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """|H(t, z1, z2) - int H(s, z1, .) H(t-s, ., z2) dvol|, 0 < s < t."""
    if not 0 < s < t:
        raise ValueError(f"need 0 < s < t, got s={s}, t={t}")
    d12 = geodesic_distance(z1, z2)
    direct = heat_kernel(t, d12, quad)

    tail = math.sqrt(math.log(1.0 / quad.tail_tol))
    r_max = d12 + s + (t - s) + 2.0 * tail * (math.sqrt(s) + math.sqrt(t - s)) + 8.0
    first = kernel_profile(s, r_max, quad)
    second = kernel_profile(t - s, r_max, quad)

    def ring(r):
        def around(theta):
            x, y = polar_coordinates_xy(z1, r, theta)
            d = geodesic_distance_xy(x, y, z2.x, z2.y)
            return second(np.minimum(d, r_max))

        mean_second, _ = gauss_legendre_doubling(around, 0.0, 2.0 * math.pi, quad, n0=64)
        return first(r) * mean_second * math.sinh(r)

    convolved, _ = integrate_1d(ring, 0.0, r_max, quad)
    return abs(direct - convolved)


def diagonal_ratio(t: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """H(t, 0) f(t) / sqrt(t); uniformly bounded on any tested range."""
    return heat_kernel(t, 0.0, quad) * envelope_f(t) / math.sqrt(t)


def gaussian_lower_ratio(d: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """H(2, d) e^(d^2/2); bounded below by a positive constant."""
    return heat_kernel(2.0, d, quad) * math.exp(0.5 * d * d)


@dataclass(frozen=True)
class GaussianFit:
    """Feasible upper envelope H(t,d) <= K sqrt(gamma t)/f(gamma t) e^(-alpha d^2/t).

    max_violation is max(H - K * envelope) over the fit grid; a valid fit
    has max_violation <= 0.
    """

    K: float
    gamma: float
    alpha: float
    t_grid: tuple
    d_grid: tuple
    max_violation: float

    def envelope(self, t, d):
        t = np.asarray(t, dtype=float)
        d = np.asarray(d, dtype=float)
        gt = self.gamma * t
        return self.K * np.sqrt(gt) / envelope_f(gt) * np.exp(-self.alpha * d * d / t)


DEFAULT_GAMMA_GRID = tuple(float(2.0**e) for e in np.linspace(-4.0, 4.0, 33))
DEFAULT_ALPHA_GRID = tuple(float(2.0**e) for e in np.linspace(-4.0, -1.0, 13))


def gaussian_upper_fit(t_grid, d_grid, quad: QuadratureSpec = DEFAULT_QUAD,
                       gamma_grid=DEFAULT_GAMMA_GRID, alpha_grid=DEFAULT_ALPHA_GRID,
                       safety: float = 1.02) -> GaussianFit:
    """Smallest K over a (gamma, alpha) grid making the bound hold.

    K at fixed (gamma, alpha) is the exact maximum of H / envelope over the
    grid; ties in (gamma, alpha) resolve toward the smallest values. The
    returned K carries a small safety factor so the fitted bound also
    survives re-evaluation on refined grids.
    """
    t_grid = tuple(float(t) for t in t_grid)
    d_grid = tuple(float(d) for d in d_grid)
    if not t_grid or not d_grid:
        raise ValueError("fit grids must be non-empty")
    H = np.array([[heat_kernel(t, d, quad) for d in d_grid] for t in t_grid])
    ts = np.array(t_grid)[:, None]
    ds = np.array(d_grid)[None, :]
    best = None
    for alpha in sorted(alpha_grid):
        for gamma in sorted(gamma_grid):
            gt = gamma * ts
            env = np.sqrt(gt) / envelope_f(gt) * np.exp(-alpha * ds * ds / ts)
            k = float(np.max(H / env))
            if best is None or k < best[0] * (1.0 - 1e-12):
                best = (k, gamma, alpha, env)
    k, gamma, alpha, env = best
    k *= safety
    violation = float(np.max(H - k * env))
    if violation > 0:
        raise RuntimeError(f"gaussian upper fit infeasible: violation {violation!r}")
    return GaussianFit(k, gamma, alpha, t_grid, d_grid, violation)


def fit_violation(fit: GaussianFit, t_grid, d_grid, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """max(H - fitted envelope) over an arbitrary validation grid."""
    worst = -math.inf
    for t in t_grid:
        for d in d_grid:
            worst = max(worst, heat_kernel(float(t), float(d), quad) - float(fit.envelope(t, d)))
    return worst


def refine_grid(t_grid, d_grid):
    """2x-resolution validation grid: geometric midpoints in t, halved d-step."""
    t_grid = sorted(float(t) for t in t_grid)
    d_grid = sorted(float(d) for d in d_grid)
    t_fine = []
    for a, b in zip(t_grid[:-1], t_grid[1:]):
        t_fine += [a, math.sqrt(a * b)]
    t_fine.append(t_grid[-1])
    d_fine = []
    for a, b in zip(d_grid[:-1], d_grid[1:]):
        d_fine += [a, 0.5 * (a + b)]
    d_fine.append(d_grid[-1])
    return tuple(t_fine), tuple(d_fine)


def evolve_from_kernel(u0_point: HalfPlanePoint, offset: float, t: float,
                       z: HalfPlanePoint, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Heat solution launched from u0 = H(offset, ., u0_point), at time t.

    By the semigroup identity this is H(t + offset, z, u0_point).
    """
    if not offset > 0:
        raise ValueError(f"offset must be positive, got {offset}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    return heat_kernel_points(t + offset, z, u0_point, quad)
