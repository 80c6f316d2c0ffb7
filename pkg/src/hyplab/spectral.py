"""Band-limited calculus on the half-plane via the radial spherical transform.

The radial eigenfunctions phi_s (eigenvalue s^2 + 1/4 of minus the
Laplacian) are computed from the single-integral representation

    phi_s(r) = (sqrt(2)/pi) int_0^r cos(s t) / sqrt(cosh r - cosh t) dt,

desingularized by t = r - u^2 exactly like the heat-kernel integral (the
circle-average form is mathematically equivalent but oscillates with an
exponentially compressed chirp and cancels like e^r, so it is kept only
as a small-radius cross-check). The representation is self-verifying
through the radial eigen-equation. The transform pair used throughout is

    fhat(s) = 2 pi int_0^inf f(r) phi_s(r) sinh r dr,
    f(r)    = c_P int_0^inf fhat(s) phi_s(r) s tanh(pi s) ds,

with the single scalar c_P fixed by calibration (see
calibrate_plancherel); the calibrated value is 1/(2 pi). Frequencies are
parameterized by s in [0, inf) with lam(s) = sqrt(s^2 + 1/4), so the
spectrum of the square root of minus the Laplacian starts at 1/2 and a
band limit below 1/2 yields the zero projector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import HalfPlanePoint, geodesic_distance, geodesic_distance_xy
from .quadrature import DEFAULT_QUAD, QuadratureSpec, gauss_legendre_doubling, leggauss_cached
from .regions import Region, _ring_arcs

# Calibrated Plancherel normalization for the transform pair above; the
# derivation lives in calibrate_plancherel and demos/spectral_transform.py.
PLANCHEREL_CONSTANT = 1.0 / (2.0 * math.pi)

COEFFS_SCHEMA_VERSION = 1


class DegenerateInputError(ValueError):
    """Raised when an operation would divide by a vanishing norm."""


def lam(s):
    """Frequency lam(s) = sqrt(s^2 + 1/4) of the spectral parameter s."""
    s = np.asarray(s, dtype=float)
    out = np.sqrt(s * s + 0.25)
    return out if out.shape else float(out)


def _phi_nodes(r: float, s_max: float) -> int:
    # total phase of cos(s (r - u^2)) is s_max * r
    return max(64, int(1.6 * r * max(s_max, 1.0)) + 64)


def _sinhc(w):
    w = np.asarray(w, dtype=float)
    small = np.abs(w) < 1e-8
    safe = np.where(small, 1.0, w)
    return np.where(small, 1.0 + w * w / 6.0, np.sinh(safe) / safe)


def _phi_row(s_values: np.ndarray, r: float) -> np.ndarray:
    """phi_s(r) for every s at a single radius, with node doubling.

    Integrates (2/pi) cos(s (r - u^2)) sqrt(2 / sinhc(u^2/2))
    / sqrt(sinh(r - u^2/2)) over u in (0, sqrt(r)); the integrand is
    smooth, uniformly bounded and oscillates with total phase s r.
    """
    if r == 0.0:
        return np.ones_like(s_values)
    n = _phi_nodes(r, float(np.max(s_values)))
    base_nodes, base_weights = leggauss_cached(64)
    order = len(base_nodes)
    u_max = math.sqrt(r)

    def estimate(n):
        panels = max(1, -(-n // order))
        half = 0.5 * u_max / panels
        mids = (np.arange(panels) + 0.5) * (u_max / panels)
        u = (half * base_nodes[None, :] + mids[:, None]).ravel()
        w = np.tile(half * base_weights, panels)
        half_usq = 0.5 * u * u
        amp = np.sqrt(2.0 / _sinhc(half_usq)) / np.sqrt(np.sinh(r - half_usq))
        block = np.cos(np.outer(s_values, r - u * u))
        return (2.0 / math.pi) * (block @ (w * amp))

    prev = estimate(n)
    for _ in range(5):
        n *= 2
        curr = estimate(n)
        if np.max(np.abs(curr - prev)) < 1e-12 + 1e-11 * np.max(np.abs(curr)):
            return curr
        prev = curr
    return curr


def spherical_function_circle(s: float, r: float, n: int = 4096) -> float:
    """Circle-average form of phi_s(r): the mean over the circle of
    (cosh r + sinh r cos a)^(-1/2 + i s), real part.

    Exponentially ill-conditioned as r grows; retained as an independent
    small-radius cross-check of the production representation.
    """
    nodes, weights = leggauss_cached(64)
    panels = max(1, -(-n // len(nodes)))
    half = 0.5 * math.pi / panels
    mids = (np.arange(panels) + 0.5) * (math.pi / panels)
    a = (half * nodes[None, :] + mids[:, None]).ravel()
    w = np.tile(half * weights, panels)
    x = math.cosh(r) + math.sinh(r) * np.cos(a)
    values = x ** (-0.5) * np.cos(s * np.log(x))
    return float(values @ w / math.pi)


def spherical_function(s: float, r: float) -> float:
    """Radial eigenfunction phi_s(r), normalized to phi_s(0) = 1."""
    if s < 0 or r < 0:
        raise ValueError("spherical_function needs s >= 0 and r >= 0")
    return float(_phi_row(np.array([float(s)]), float(r))[0])


def phi_matrix(s_values, r_values) -> np.ndarray:
    """Matrix phi[i, j] = phi_{s_j}(r_i)."""
    s_values = np.asarray(s_values, dtype=float)
    return np.vstack([_phi_row(s_values, float(r)) for r in np.asarray(r_values, dtype=float)])


def _integration_weights(x: np.ndarray) -> np.ndarray:
    """Composite-Simpson weights on a uniform grid (3/8 tail if needed)."""
    n = len(x)
    if n < 4:
        raise ValueError("need at least 4 integration nodes")
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9):
        raise ValueError("integration grid must be uniform")
    w = np.zeros(n)
    intervals = n - 1
    if intervals % 2 == 0:
        m = n
        w[0:m] = _simpson_block(m, h)
    else:
        m = n - 3
        w[0:m] += _simpson_block(m, h)
        w[m - 1 :] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
    return w


def _simpson_block(m: int, h: float) -> np.ndarray:
    w = np.ones(m)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def default_s_grid(s_max: float = 20.0, nodes: int = 512) -> np.ndarray:
    """Uniform spectral grid on [0, s_max]."""
    return np.linspace(0.0, s_max, nodes)


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    """Sampled transform data of a radial profile about a base point.

    s_grid must be strictly increasing with finite values; the effective
    band limit is lam at the largest s carrying a nonzero sample.
    """

    s_grid: np.ndarray
    values: np.ndarray
    base_point: HalfPlanePoint = HalfPlanePoint(0.0, 1.0)

    def __post_init__(self):
        s = np.asarray(self.s_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if s.ndim != 1 or v.shape != s.shape:
            raise ValueError("s_grid and values must be matching 1-D arrays")
        if np.any(np.diff(s) <= 0):
            raise ValueError("s_grid must be strictly increasing")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(v))):
            raise ValueError("spectral data must be finite")
        object.__setattr__(self, "s_grid", s)
        object.__setattr__(self, "values", v)

    @property
    def effective_band_limit(self) -> float:
        nonzero = np.nonzero(self.values)[0]
        if nonzero.size == 0:
            return 0.0
        return float(lam(self.s_grid[nonzero[-1]]))

    def norm_sq(self) -> float:
        """Squared L2 norm through the Plancherel identity."""
        w = _integration_weights(self.s_grid)
        density = self.s_grid * np.tanh(math.pi * self.s_grid)
        return float(PLANCHEREL_CONSTANT * np.sum(w * self.values**2 * density))


def spherical_transform(f_radial, r_support: float, s_grid=None,
                        quad: QuadratureSpec = DEFAULT_QUAD,
                        base_point: HalfPlanePoint = HalfPlanePoint(0.0, 1.0)) -> SpectralCoefficients:
    """Transform of a radial profile supported (or negligible) beyond r_support."""
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)

    def integrand(r):
        phi = phi_matrix(s, r)
        return phi * (np.asarray(f_radial(r)) * np.sinh(r))[:, None]

    values, _ = gauss_legendre_doubling(integrand, 0.0, r_support, quad, n0=64)
    return SpectralCoefficients(s, 2.0 * math.pi * values, base_point)


def inverse_spherical_transform(coeffs: SpectralCoefficients, r: float,
                                quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Radial profile value at distance r from the base point."""
    phi = _phi_row(coeffs.s_grid, float(r))
    w = _integration_weights(coeffs.s_grid)
    density = coeffs.s_grid * np.tanh(math.pi * coeffs.s_grid)
    return float(PLANCHEREL_CONSTANT * np.sum(w * coeffs.values * phi * density))


@dataclass(frozen=True)
class Component:
    """One translated radial piece of a band-limited function."""

    base_point: HalfPlanePoint
    coeffs: SpectralCoefficients
    weight: float = 1.0


@dataclass(frozen=True, eq=False)
class BandlimitedFunction:
    """Finite weighted sum of translated radial inverse transforms."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("need at least one component")
        for comp in comps:
            if not isinstance(comp, Component):
                raise TypeError("components must be Component instances")
        object.__setattr__(self, "components", comps)

    @classmethod
    def radial(cls, coeffs: SpectralCoefficients, weight: float = 1.0) -> "BandlimitedFunction":
        return cls((Component(coeffs.base_point, coeffs, weight),))

    @property
    def band_limit(self) -> float:
        return max(comp.coeffs.effective_band_limit for comp in self.components)

    def profile(self, component_index: int = 0, r_max: float = 30.0, nodes: int = 800):
        """Cubic-spline radial profile of one component."""
        comp = self.components[component_index]
        rs = np.linspace(0.0, r_max, nodes)
        phi = phi_matrix(comp.coeffs.s_grid, rs)
        w = _integration_weights(comp.coeffs.s_grid)
        density = comp.coeffs.s_grid * np.tanh(math.pi * comp.coeffs.s_grid)
        vals = PLANCHEREL_CONSTANT * phi @ (w * comp.coeffs.values * density)
        return CubicSpline(rs, vals)

    def evaluate_xy(self, x, y, r_max: float = 30.0, _cache={}):
        """Pointwise values; profile splines are built once per component."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for i, comp in enumerate(self.components):
            key = (id(self), i, r_max)
            if key not in _cache:
                _cache[key] = self.profile(i, r_max=r_max)
            spline = _cache[key]
            d = geodesic_distance_xy(x, y, comp.base_point.x, comp.base_point.y)
            vals = np.where(d <= r_max, spline(np.minimum(d, r_max)), 0.0)
            out = out + comp.weight * vals
        return out

    def evaluate(self, z: HalfPlanePoint, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
        """Exact (non-spline) evaluation at a point."""
        total = 0.0
        for comp in self.components:
            d = geodesic_distance(z, comp.base_point)
            total += comp.weight * inverse_spherical_transform(comp.coeffs, d, quad)
        return total

    def norm_sq(self, quad: QuadratureSpec = DEFAULT_QUAD, r_cut: float = 30.0) -> float:
        """Squared L2 norm: Plancherel for one component, else quadrature."""
        if len(self.components) == 1:
            comp = self.components[0]
            return comp.weight**2 * comp.coeffs.norm_sq()
        base = self.components[0].base_point

        def ring(r):
            def around(theta):
                xs, ys = _polar(base, r, theta)
                return self.evaluate_xy(xs, ys, r_max=r_cut + 1.0) ** 2

            mean, _ = gauss_legendre_doubling(around, 0.0, 2.0 * math.pi, quad, n0=64)
            return mean * math.sinh(r)

        from .quadrature import integrate_1d

        value, _ = integrate_1d(ring, 0.0, r_cut, quad)
        return float(value)


def _polar(base, r, theta):
    from .geometry import polar_coordinates_xy

    return polar_coordinates_xy(base, r, theta)


def _mapped(u, fn) -> BandlimitedFunction:
    comps = []
    for comp in u.components:
        new_values = fn(comp.coeffs)
        comps.append(Component(comp.base_point, replace(comp.coeffs, values=new_values), comp.weight))
    return BandlimitedFunction(tuple(comps))


def _as_function(u) -> BandlimitedFunction:
    if isinstance(u, BandlimitedFunction):
        return u
    if isinstance(u, SpectralCoefficients):
        return BandlimitedFunction.radial(u)
    raise TypeError(f"expected coefficients or band-limited function, got {type(u).__name__}")


def project(u, band_limit: float):
    """Sharp frequency cutoff: zero every sample with lam(s) > band_limit.

    Idempotent and norm non-increasing. Band limits below 1/2 (the bottom
    of the spectrum) leave nothing: the result is identically zero.
    """
    u = _as_function(u)

    def cut(coeffs):
        return np.where(lam(coeffs.s_grid) <= band_limit, coeffs.values, 0.0)

    return _mapped(u, cut)


def functional_calculus_apply(u, multiplier):
    """Apply a bounded multiplier phi(lam) on the frequency side.

    The norm obeys ||phi(.) u|| <= sup |phi| over the occupied band.
    """
    u = _as_function(u)

    def apply_mult(coeffs):
        return coeffs.values * multiplier(lam(coeffs.s_grid))

    return _mapped(u, apply_mult)


def harmonic_lift(u, band_limit: float, t: float, z: HalfPlanePoint,
                  quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Value at (t, z) of the lift with multiplier sinh(lam t)/lam.

    The lift vanishes at t = 0, its t-derivative there is the projected
    function, and it is annihilated by (d_tt + y^2 (d_xx + d_yy)).
    """
    proj = project(u, band_limit)

    def mult(lams):
        return t * _sinhc(lams * t)

    lifted = functional_calculus_apply(proj, mult)
    return lifted.evaluate(z, quad)


def lift_radial_values(coeffs: SpectralCoefficients, band_limit: float,
                       t_values, r_values) -> np.ndarray:
    """Matrix of lift values g[t_i, r_j] for a single radial component."""
    cut = np.where(lam(coeffs.s_grid) <= band_limit, coeffs.values, 0.0)
    lams = lam(coeffs.s_grid)
    w = _integration_weights(coeffs.s_grid)
    density = coeffs.s_grid * np.tanh(math.pi * coeffs.s_grid)
    phi = phi_matrix(coeffs.s_grid, r_values)  # (R, S)
    t_values = np.asarray(t_values, dtype=float)
    mult = t_values[:, None] * _sinhc(lams[None, :] * t_values[:, None])  # (T, S)
    return PLANCHEREL_CONSTANT * (mult * (w * cut * density)[None, :]) @ phi.T


def ball_norm_sq(u: BandlimitedFunction, r_cut: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Squared norm of a single-component function over a centered ball."""
    if len(u.components) != 1:
        raise ValueError("ball_norm_sq expects a single radial component")
    comp = u.components[0]
    spline = u.profile(0, r_max=r_cut)
    from .quadrature import integrate_1d

    def ring(r):
        return 2.0 * math.pi * float(spline(r)) ** 2 * math.sinh(r) * comp.weight**2

    value, _ = integrate_1d(ring, 0.0, r_cut, quad)
    return float(value)


def spectral_estimate_ratio(u, band_limit: float, region: Region,
                            quad: QuadratureSpec = DEFAULT_QUAD, r_cut: float = 16.0,
                            n_radial: int = 4001, n_theta: int = 2048) -> float:
    """Mass fraction ||P u||^2_region / ||P u||^2, P the band projector.

    The region norm is assembled from vectorized ring measures on a fine
    radial grid; the far tail beyond r_cut cannot be localized to the
    region, so it is split evenly and the result is the midpoint of
    rigorous brackets with halfwidth tail/(2 total). Raises
    DegenerateInputError when the projection vanishes.
    """
    from .regions import ring_measure_profile

    proj = project(u, band_limit)
    if len(proj.components) != 1:
        raise ValueError("the ratio experiment expects a single radial component")
    total = proj.norm_sq(quad)
    if not total > 0:
        raise DegenerateInputError("projected function has zero norm")
    comp = proj.components[0]
    base = comp.base_point
    spline = proj.profile(0, r_max=r_cut)

    rs = np.linspace(0.0, r_cut, n_radial)
    density = comp.weight**2 * np.asarray(spline(rs)) ** 2 * np.sinh(rs)
    measures = ring_measure_profile(region, base, rs, n_theta=n_theta)
    inside = float(np.trapezoid(measures * density, rs))
    ball_total = float(np.trapezoid(2.0 * math.pi * density, rs))
    tail = max(total - ball_total, 0.0)
    ratio = (inside + 0.5 * tail) / total
    return float(min(max(ratio, 0.0), 1.0))


def heat_kernel_spectral(t: float, d: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Heat kernel from the frequency side:
    c_P int e^(-t lam(s)^2) phi_s(d) s tanh(pi s) ds.

    Independent of the single-integral kernel formula; agreement between
    the two certifies both routes and the Plancherel calibration.
    """
    if not t > 0:
        raise ValueError(f"heat kernel needs t > 0, got {t}")
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    s_max = math.sqrt(math.log(1.0 / quad.tail_tol) / t) + 2.0

    def integrand(s):
        phi = _phi_row(s, float(d))
        return np.exp(-t * lam(s) ** 2) * phi * s * np.tanh(math.pi * s)

    value, _ = gauss_legendre_doubling(integrand, 0.0, s_max, quad, n0=128)
    return float(PLANCHEREL_CONSTANT * value)


def calibrate_plancherel(quad: QuadratureSpec = DEFAULT_QUAD):
    """Re-derive the Plancherel scalar from a transform round trip.

    Transforms a compactly supported bump, inverts with unit constant and
    returns the ratio together with diagnostics of the heat-multiplier
    cross-check (the transform of a heat profile divided by
    e^(-t lam^2) must be flat in s).
    """

    def bump(r):
        r = np.asarray(r, dtype=float)
        inside = r < 2.0
        safe = np.where(inside, r / 2.0, 0.0)
        return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe**2)), 0.0)

    coeffs = spherical_transform(bump, 2.0, default_s_grid(24.0, 769), quad)
    probe_r = np.array([0.0, 0.3, 0.6, 0.9, 1.2])
    ratios = []
    for r in probe_r:
        unit = inverse_spherical_transform(coeffs, float(r), quad) / PLANCHEREL_CONSTANT
        ratios.append(float(bump(np.array([r]))[0]) / unit)
    c_p = float(np.mean(ratios))

    from .heatkernel import heat_kernel

    t = 1.0
    # exact kernel values keep the radial integrand analytic, which the
    # spline profile (only C^2) would not
    kernel_quad = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-10,
                                 max_subdivisions=quad.max_subdivisions,
                                 tail_tol=quad.tail_tol)

    def kernel_radial(r):
        return np.array([heat_kernel(t, float(ri), kernel_quad) for ri in np.atleast_1d(r)])

    heat_coeffs = spherical_transform(kernel_radial, 16.0, default_s_grid(4.0, 257), kernel_quad)
    expected = np.exp(-t * lam(heat_coeffs.s_grid) ** 2)
    flat = heat_coeffs.values / expected
    diagnostics = {
        "roundtrip_spread": float(np.max(ratios) - np.min(ratios)),
        "heat_multiplier_mean": float(np.mean(flat)),
        "heat_multiplier_spread": float(np.max(flat) - np.min(flat)),
    }
    return c_p, diagnostics


def save_coefficients(path, coeffs: SpectralCoefficients):
    payload = {
        "version": COEFFS_SCHEMA_VERSION,
        "base_point": [coeffs.base_point.x, coeffs.base_point.y],
        "s_grid": coeffs.s_grid.tolist(),
        "values": coeffs.values.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_coefficients(path) -> SpectralCoefficients:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("version") != COEFFS_SCHEMA_VERSION:
        raise ValueError(f"unsupported coefficients schema version {payload.get('version')!r}")
    x, y = payload["base_point"]
    return SpectralCoefficients(
        np.array(payload["s_grid"], dtype=float),
        np.array(payload["values"], dtype=float),
        HalfPlanePoint(x, y),
    )
