"""Observability-constant arithmetic and the thickness-extraction experiment.

The calculator turns an interpolation (Hoelder-type) inequality for heat
solutions into an explicit final-time observability constant through a
telescoping series over the times l_m = lambda^(m-1) T, and the
extraction experiment runs the converse direction: given an observability
constant and the empirical Gaussian bounds of the kernel, it produces a
radius and mass level (R, delta) that every geodesic ball must carry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import GeodesicBall, HalfPlanePoint, polar_coordinates_xy, geodesic_distance_xy
from .heatkernel import (
    GaussianFit,
    envelope_f,
    gaussian_lower_ratio,
    gaussian_upper_fit,
    heat_kernel,
    kernel_profile,
)
from .quadrature import DEFAULT_QUAD, QuadratureSpec, gauss_legendre_doubling, integrate_1d, leggauss_cached
from .regions import Region, _ring_arcs, ball_mass
from .spectral import BandlimitedFunction, functional_calculus_apply

LAMBDA_MIN = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ObservabilityInputs:
    """Constants feeding the telescoping calculator.

    K is the exponent constant of the spectral estimate, C_tilde the
    Hoelder constant, T the horizon, lam the telescoping ratio in
    (1/sqrt(2), 1).
    """

    K: float
    C_tilde: float
    T: float
    lam: float

    def __post_init__(self):
        if not (self.K > 0 and self.C_tilde > 0 and self.T > 0):
            raise ValueError("K, C_tilde and T must be positive")
        if not LAMBDA_MIN < self.lam < 1.0:
            raise ValueError(f"lam must lie strictly in (1/sqrt(2), 1), got {self.lam}")


def hoelder_threshold(K: float, T: float, eta: float) -> float:
    """Positive frequency where e^(K L - T L^2) equals eta.

    Closed form (K + sqrt(K^2 + 4 T log(1/eta))) / (2 T); for eta = 1 this
    degenerates to K / T.
    """
    if not (K > 0 and T > 0):
        raise ValueError("K and T must be positive")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    return (K + math.sqrt(K * K + 4.0 * T * math.log(1.0 / eta))) / (2.0 * T)


def telescoping_constants(lam: float, C_tilde: float):
    """(mu, C_prime) with mu = 1/(2 - lam^-2) and
    C_prime = 1 + lam + 2 C_tilde (1 + lam) / lam."""
    if not LAMBDA_MIN < lam < 1.0:
        raise ValueError(f"lam must lie strictly in (1/sqrt(2), 1), got {lam}")
    if not C_tilde > 0:
        raise ValueError("C_tilde must be positive")
    mu = 1.0 / (2.0 - lam**-2)
    c_prime = 1.0 + lam + 2.0 * C_tilde * (1.0 + lam) / lam
    return mu, c_prime


def telescoping_times(T: float, lam: float, m_max: int = 12) -> np.ndarray:
    """The shrinking times l_m = lam^(m-1) T for m = 1..m_max."""
    return T * lam ** np.arange(0, m_max)


def telescoping_epsilons(inp: ObservabilityInputs, m_max: int = 9) -> np.ndarray:
    """Per-step weights eps_m = exp(-(mu-1) C' / (l_m - l_{m+2}))."""
    mu, c_prime = telescoping_constants(inp.lam, inp.C_tilde)
    ls = telescoping_times(inp.T, inp.lam, m_max + 2)
    gaps = ls[:m_max] - ls[2 : m_max + 2]
    return np.exp(-(mu - 1.0) * c_prime / gaps)


def log_observability_constant(inp: ObservabilityInputs) -> float:
    """Exponent of C_obs: 2 C_tilde + mu C' / (T (1 - lam^2))."""
    mu, c_prime = telescoping_constants(inp.lam, inp.C_tilde)
    return 2.0 * inp.C_tilde + mu * c_prime / (inp.T * (1.0 - inp.lam**2))


def observability_constant(inp: ObservabilityInputs, optimize_lam: bool = False) -> float:
    """Final-time observability constant from the telescoping sum.

    Decreasing in T. With optimize_lam the stated ratio is ignored and
    the exponent is minimized over a grid inside (1/sqrt(2), 1).
    """
    if optimize_lam:
        _, value = optimal_lambda(inp.C_tilde, inp.T, K=inp.K)
        return value
    return math.exp(log_observability_constant(inp))


def optimal_lambda(C_tilde: float, T: float, K: float = 1.0, n_grid: int = 400):
    """Grid-minimizing telescoping ratio and its observability constant."""
    lams = np.linspace(LAMBDA_MIN + 1e-3, 1.0 - 1e-3, n_grid)
    exponents = [
        log_observability_constant(ObservabilityInputs(K, C_tilde, T, float(l))) for l in lams
    ]
    i = int(np.argmin(exponents))
    return float(lams[i]), math.exp(exponents[i])


@dataclass(frozen=True)
class KernelState:
    """Heat state launched from u0 = H(offset, ., source)."""

    source: HalfPlanePoint
    offset: float = 1.0

    def __post_init__(self):
        if not self.offset > 0:
            raise ValueError("offset must be positive")


def _kernel_state_norms(state: KernelState, T: float, region: Region,
                        quad: QuadratureSpec):
    """(||u(T)||^2, ||u(T)||^2_region, ||u0||^2) for a kernel-launched state."""
    tail = math.sqrt(math.log(1.0 / quad.tail_tol))

    def radial_norm_sq(t):
        r_max = t + 4.0 * math.sqrt(t) * tail + 8.0
        spline = kernel_profile(t, r_max, quad)

        def ring(r):
            return 2.0 * math.pi * float(spline(r)) ** 2 * math.sinh(r)

        value, _ = integrate_1d(ring, 0.0, r_max, quad)
        return value, spline, r_max

    norm_T_sq, spline_T, r_max = radial_norm_sq(T + state.offset)
    norm_0_sq, _, _ = radial_norm_sq(state.offset)

    def ring_region(r):
        if r <= 0:
            return 0.0
        measure, _ = _ring_arcs(region, state.source, r)
        return measure * float(spline_T(r)) ** 2 * math.sinh(r)

    region_T_sq, _ = integrate_1d(ring_region, 0.0, r_max, quad)
    return float(norm_T_sq), float(max(region_T_sq, 0.0)), float(norm_0_sq)


def _bandlimited_norms(u0: BandlimitedFunction, T: float, region: Region,
                       quad: QuadratureSpec, r_cut: float = 22.0):
    if len(u0.components) != 1:
        raise ValueError("band-limited Hoelder checks expect one radial component")
    evolved = functional_calculus_apply(u0, lambda lams: np.exp(-T * lams**2))
    comp = evolved.components[0]
    spline = evolved.profile(0, r_max=r_cut)

    def ring_region(r):
        if r <= 0:
            return 0.0
        measure, _ = _ring_arcs(region, comp.base_point, r)
        return measure * float(spline(r)) ** 2 * math.sinh(r) * comp.weight**2

    region_T_sq, _ = integrate_1d(ring_region, 0.0, r_cut, quad)
    return evolved.norm_sq(quad), float(max(region_T_sq, 0.0)), u0.norm_sq(quad)


def _state_norms(state, T, region, quad):
    if isinstance(state, KernelState):
        return _kernel_state_norms(state, T, region, quad)
    if isinstance(state, BandlimitedFunction):
        return _bandlimited_norms(state, T, region, quad)
    raise TypeError(f"unsupported state {type(state).__name__}")


def hoelder_check(state, region: Region, T: float, C_tilde_candidate: float,
                  quad: QuadratureSpec = DEFAULT_QUAD) -> bool:
    """Does ||u(T)||^2 <= exp(C~ (1 + 1/T)) ||u(T)||_region ||u0|| hold?"""
    if not T > 0:
        raise ValueError("T must be positive")
    norm_T_sq, region_T_sq, norm_0_sq = _state_norms(state, T, region, quad)
    if norm_0_sq <= 0:
        raise DegenerateStateError("initial state has zero norm")
    rhs = math.exp(C_tilde_candidate * (1.0 + 1.0 / T)) * math.sqrt(region_T_sq) * math.sqrt(norm_0_sq)
    return norm_T_sq <= rhs


def time_shifted_check(state, region: Region, t1: float, t2: float, eps: float,
                       C_tilde: float, quad: QuadratureSpec = DEFAULT_QUAD) -> bool:
    """Time-translated variant on a (t1, t2, eps) triple:
    ||u(t2)||^2 <= (1/eps) e^(2 C~ (1 + 1/(t2-t1))) ||u(t2)||^2_region
                   + eps ||u(t1)||^2."""
    if not (0 < t1 < t2 and eps > 0):
        raise ValueError("need 0 < t1 < t2 and eps > 0")
    norm_t2_sq, region_t2_sq, _ = _state_norms(state, t2, region, quad)
    norm_t1_sq, _, _ = _state_norms(state, t1, region, quad)
    rhs = (1.0 / eps) * math.exp(2.0 * C_tilde * (1.0 + 1.0 / (t2 - t1))) * region_t2_sq
    rhs += eps * norm_t1_sq
    return norm_t2_sq <= rhs


class DegenerateStateError(ValueError):
    pass


class ExtractionError(RuntimeError):
    """The radius search hit its bound before the tail dropped far enough."""


def gaussian_volume_integral(c: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """int over the plane of e^(-c d(z, base)^2) dvol, any base point.

    Computed in geodesic polar coordinates; finite for every c > 0. The
    peak of the ring integrand sits at r = 1/(2c).
    """
    if not c > 0:
        raise ValueError("need a positive Gaussian rate")
    r_peak = 1.0 / (2.0 * c)
    r_max = r_peak + math.sqrt((1.0 / (4.0 * c) + math.log(1.0 / quad.tail_tol) + 50.0) / c) + 5.0

    def ring(r):
        # e^(-c r^2) sinh(r) written in exponential form to dodge overflow
        return math.pi * (math.exp(-c * r * r + r) - math.exp(-c * r * r - r))

    value, _ = integrate_1d(ring, 0.0, r_max, quad)
    return float(value)


@dataclass(frozen=True)
class ThicknessExtraction:
    """(R, delta) produced by the observability-to-thickness experiment."""

    alpha: float
    beta: float
    L: float
    delta: float
    C_doubleprime: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("extracted delta must be positive")
        if not np.isfinite(self.L):
            raise ValueError("extracted radius must be finite")


DEFAULT_Z0_SAMPLES = (
    HalfPlanePoint(0.0, 1.0),
    HalfPlanePoint(5.0, 0.1),
    HalfPlanePoint(-3.0, 40.0),
)


def extract_thickness(region: Region, c_obs: float, quad: QuadratureSpec = DEFAULT_QUAD,
                      fit: Optional[GaussianFit] = None,
                      lower_d_grid=(0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0),
                      z0_samples=DEFAULT_Z0_SAMPLES,
                      L_step: float = 0.5, L_max: float = 400.0,
                      verify: bool = True):
    """Extract (R = L, delta = C''/2) from an observability constant.

    The constants chain: a lower bound |H(2, d)|^2 >= c_low^2 e^(-2 beta d^2)
    with beta = 1/2, an upper fit H <= K sqrt(gamma t)/f(gamma t)
    e^(-alpha d^2 / t), and the observability inequality at horizon 1
    combine into

        C'' = c_low^2 I(2 beta) f(gamma)^2 / (c_obs K^2 gamma),

    where I(c) is the Gaussian volume integral; L is the smallest grid
    radius with e^(-alpha L^2 / 2) I(alpha/2) < C''/2. Every integral is
    evaluated in polar coordinates about the base point, so the outcome
    carries no dependence on z0; the optional verification evaluates the
    observability inequality and the extracted mass bound at each sample.
    Returns (extraction, report dict).
    """
    if not c_obs > 0:
        raise ValueError("observability constant must be positive")
    if fit is None:
        fit = gaussian_upper_fit((0.5, 1.0, 2.0, 4.0), tuple(float(d) for d in range(7)), quad)
    beta = 0.5
    lower_ratios = [gaussian_lower_ratio(float(d), quad) for d in lower_d_grid]
    c_low = min(lower_ratios)
    i_lower = gaussian_volume_integral(2.0 * beta, quad)
    i_split = gaussian_volume_integral(fit.alpha / 2.0, quad)
    c_pp = c_low**2 * i_lower * envelope_f(fit.gamma) ** 2 / (c_obs * fit.K**2 * fit.gamma)

    L = None
    n_steps = int(L_max / L_step)
    for i in range(1, n_steps + 1):
        candidate = i * L_step
        if math.exp(-0.5 * fit.alpha * candidate**2) * i_split < 0.5 * c_pp:
            L = candidate
            break
    if L is None:
        raise ExtractionError(
            f"no radius below {L_max} pushes the split tail under C''/2 = {0.5 * c_pp!r}")

    extraction = ThicknessExtraction(alpha=fit.alpha, beta=beta, L=L,
                                     delta=0.5 * c_pp, C_doubleprime=c_pp)
    report = {
        "alpha": fit.alpha,
        "beta": beta,
        "gamma": fit.gamma,
        "K_upper": fit.K,
        "c_lower": c_low,
        "gaussian_volume_lower": i_lower,
        "gaussian_volume_split": i_split,
        "C_doubleprime": c_pp,
        "L": L,
        "delta": extraction.delta,
        "c_obs": c_obs,
        "z0_checks": [],
    }
    if verify:
        lhs = _norm_sq_of_kernel_time(2.0, quad)
        for z0 in z0_samples:
            rhs = c_obs * _observed_energy(region, z0, quad)
            mass = ball_mass(region, GeodesicBall(z0, L), quad)
            report["z0_checks"].append({
                "z0": [z0.x, z0.y],
                "final_energy": lhs,
                "c_obs_times_observed": rhs,
                "observability_holds": bool(lhs <= rhs),
                "ball_mass_at_L": mass,
                "mass_at_least_delta": bool(mass >= extraction.delta),
            })
    return extraction, report


def _norm_sq_of_kernel_time(t: float, quad: QuadratureSpec) -> float:
    tail = math.sqrt(math.log(1.0 / quad.tail_tol))
    r_max = t + 4.0 * math.sqrt(t) * tail + 8.0
    spline = kernel_profile(t, r_max, quad)

    def ring(r):
        return 2.0 * math.pi * float(spline(r)) ** 2 * math.sinh(r)

    value, _ = integrate_1d(ring, 0.0, r_max, quad)
    return float(value)


def _observed_energy(region: Region, z0: HalfPlanePoint, quad: QuadratureSpec,
                     n_radial: int = 3001, n_theta: int = 1024) -> float:
    """int_0^1 int_region |H(s+1, z, z0)|^2 dvol ds.

    Time by 8-node Gauss, space by vectorized ring measures on a fixed
    radial grid (the observability margin dwarfs the grid error).
    """
    from .regions import ring_measure_profile

    nodes, weights = leggauss_cached(8)
    s_nodes = 0.5 * (nodes + 1.0)
    s_weights = 0.5 * weights
    r_max = 2.0 + 8.0 * math.sqrt(math.log(1.0 / quad.tail_tol)) / 2.0 + 6.0
    rs = np.linspace(0.0, r_max, n_radial)
    measures = ring_measure_profile(region, z0, rs, n_theta=n_theta)
    total = 0.0
    for s, w in zip(s_nodes, s_weights):
        t = 1.0 + float(s)
        spline = kernel_profile(t, r_max, quad)
        density = np.asarray(spline(rs)) ** 2 * np.sinh(rs)
        total += float(w) * float(np.trapezoid(measures * density, rs))
    return float(total)


def audit_report(inp: ObservabilityInputs, eta: float = 0.5, m_max: int = 9) -> dict:
    """Every intermediate constant of the calculator, for report files."""
    mu, c_prime = telescoping_constants(inp.lam, inp.C_tilde)
    ls = telescoping_times(inp.T, inp.lam, m_max)
    return {
        "K": inp.K,
        "C_tilde": inp.C_tilde,
        "T": inp.T,
        "lambda": inp.lam,
        "eta": eta,
        "Lambda_of_eta": hoelder_threshold(inp.K, inp.T, eta),
        "mu": mu,
        "C_prime": c_prime,
        "l_m": ls.tolist(),
        "eps_m": telescoping_epsilons(inp, m_max).tolist(),
        "log_C_obs": log_observability_constant(inp),
        "C_obs": observability_constant(inp),
    }


def save_report(path, report: dict):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
