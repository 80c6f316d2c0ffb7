"""Numerical laboratory for the hyperbolic half-plane.

Exact geometry, the dyadic rectangle covering, thick observation sets,
the explicit heat kernel with its Gaussian bounds, band-limited spectral
calculus, and the observability-constant arithmetic, all at desk scale.
"""

from .quadrature import DEFAULT_QUAD, QuadratureError, QuadratureSpec
from .geometry import (
    GeodesicBall,
    HalfPlanePoint,
    apply_isometry,
    ball_volume,
    euclidean_image,
    geodesic_distance,
    riemannian_integral,
)
from .covering import (
    ChartMap,
    DyadicRectangle,
    chart_forward,
    chart_inverse,
    chart_pushforward_check,
    inscribed_ball,
    locate,
    rect_extents,
)
from .regions import (
    EuclideanDisc,
    EuclideanRect,
    Region,
    Replication,
    ThicknessCertificate,
    VerticalStrip,
    ball_mass,
    load_region,
    membership,
    rect_mass,
    rect_thickness_scan,
    save_region,
    thickness_scan,
)
from .heatkernel import (
    GaussianFit,
    diagonal_ratio,
    evolve_from_kernel,
    gaussian_lower_ratio,
    gaussian_upper_fit,
    heat_kernel,
    heat_kernel_points,
    kernel_mass,
    semigroup_residual,
)
from .spectral import (
    BandlimitedFunction,
    Component,
    DegenerateInputError,
    SpectralCoefficients,
    functional_calculus_apply,
    harmonic_lift,
    heat_kernel_spectral,
    inverse_spherical_transform,
    load_coefficients,
    project,
    save_coefficients,
    spectral_estimate_ratio,
    spherical_function,
    spherical_transform,
)
from .observability import (
    KernelState,
    ObservabilityInputs,
    ThicknessExtraction,
    extract_thickness,
    hoelder_check,
    hoelder_threshold,
    observability_constant,
    telescoping_constants,
)

__all__ = [
    "DEFAULT_QUAD",
    "QuadratureError",
    "QuadratureSpec",
    "HalfPlanePoint",
    "GeodesicBall",
    "geodesic_distance",
    "euclidean_image",
    "ball_volume",
    "apply_isometry",
    "riemannian_integral",
    "DyadicRectangle",
    "ChartMap",
    "rect_extents",
    "locate",
    "inscribed_ball",
    "chart_forward",
    "chart_inverse",
    "chart_pushforward_check",
    "Region",
    "Replication",
    "EuclideanRect",
    "EuclideanDisc",
    "VerticalStrip",
    "ThicknessCertificate",
    "membership",
    "ball_mass",
    "rect_mass",
    "thickness_scan",
    "rect_thickness_scan",
    "save_region",
    "load_region",
    "heat_kernel",
    "heat_kernel_points",
    "kernel_mass",
    "semigroup_residual",
    "diagonal_ratio",
    "gaussian_lower_ratio",
    "gaussian_upper_fit",
    "GaussianFit",
    "evolve_from_kernel",
    "SpectralCoefficients",
    "BandlimitedFunction",
    "Component",
    "DegenerateInputError",
    "spherical_function",
    "spherical_transform",
    "inverse_spherical_transform",
    "project",
    "functional_calculus_apply",
    "harmonic_lift",
    "heat_kernel_spectral",
    "spectral_estimate_ratio",
    "save_coefficients",
    "load_coefficients",
    "ObservabilityInputs",
    "KernelState",
    "ThicknessExtraction",
    "hoelder_threshold",
    "telescoping_constants",
    "observability_constant",
    "hoelder_check",
    "extract_thickness",
]
