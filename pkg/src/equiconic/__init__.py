"""Equidistant conic projections and their distortion."""

from .distortion import (
    DistortionReport,
    ScaleFactors,
    SphericalAnnulus,
    TissotEllipse,
    analytic_jacobian,
    analyze_annulus,
    compare_specs,
    scale_point,
    tissot,
)
from .optimize import (
    OptimizationResult,
    optimize_cylindrical,
    optimize_one_parallel,
    optimize_two_parallels,
    solve_apex_offset,
)
from .projection import (
    ConicSpec,
    DomainError,
    PlanePoint,
    apex_colatitude,
    build_azimuthal,
    build_conic_one_parallel,
    build_conic_two_parallels,
    build_cylindrical,
    forward,
    inverse,
    rhodes_diagnostic,
    scale_factors_meridian_parallel,
)
from .sphere import GeoPoint, SphericalTriangle, TriangleAngles, geodesic_distance, midpoint

__version__ = "0.1.0"
