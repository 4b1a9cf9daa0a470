"""Local and region-wide distortion of the equidistant projections.

Every member of the family has unit meridian scale and a differential that is
diagonal in the (meridian, parallel) frame, so the principal stretches at a
point are simply ``{1, k}``.  From them

* ``sigma = max(M, 1/m)`` is the infinitesimal bi-Lipschitz constant,
* ``K = M/m`` the quasiconformal dilatation,
* over a region, ``L = sup sigma``, ``ell = inf sigma`` and the metrical
  distortion ``v = log(L/ell)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .projection import (
    AZIMUTHAL,
    CYLINDRICAL,
    ConicSpec,
    DomainError,
    PlanePoint,
    _check_scale_domain,
    critical_latitude,
    forward,
    parallel_scale,
)
from .sphere import GeoPoint

DEFAULT_GRID_STEP = math.radians(0.01)
POLE_MARGIN = 1e-9
CIRCLE_TOL = 1e-12


@dataclass(frozen=True)
class Jacobian:
    """Partials of (x, y) along the unit northward and eastward tangent vectors."""

    dx_north: float
    dy_north: float
    dx_east: float
    dy_east: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.dx_north, self.dx_east], [self.dy_north, self.dy_east]])

    @property
    def det(self) -> float:
        return self.dx_north * self.dy_east - self.dx_east * self.dy_north

    def singular_values(self) -> tuple[float, float]:
        s = np.linalg.svd(self.matrix(), compute_uv=False)
        return float(s[0]), float(s[1])


@dataclass(frozen=True)
class ScaleFactors:
    M: float
    m: float
    sigma: float
    K: float
    at: GeoPoint


@dataclass(frozen=True)
class TissotEllipse:
    center: PlanePoint
    semi_major: float
    semi_minor: float
    orientation: float  # major axis angle in the plane frame, in (-pi/2, pi/2]

    @property
    def axis_ratio(self) -> float:
        return self.semi_major / self.semi_minor


@dataclass(frozen=True)
class SphericalAnnulus:
    phi_south: float
    phi_north: float
    lon_west: float = -math.pi
    lon_east: float = math.pi

    def __post_init__(self):
        if not -math.pi / 2 <= self.phi_south < self.phi_north <= math.pi / 2:
            raise ValueError(
                f"annulus needs -90 <= south < north <= 90 deg, got "
                f"{math.degrees(self.phi_south):.6f}:{math.degrees(self.phi_north):.6f}"
            )
        if not -math.pi <= self.lon_west < self.lon_east <= math.pi:
            raise ValueError("annulus needs -180 <= west < east <= 180 deg")

    @classmethod
    def from_degrees(cls, south: float, north: float, west: float = -180.0, east: float = 180.0):
        return cls(*(math.radians(v) for v in (south, north, west, east)))

    @property
    def width(self) -> float:
        return self.phi_north - self.phi_south

    @property
    def center_lon(self) -> float:
        return 0.5 * (self.lon_west + self.lon_east)

    def check_for(self, spec: ConicSpec) -> None:
        """Reject regions reaching a pole where the spec's scale is unbounded."""
        limit = math.pi / 2 - POLE_MARGIN
        if self.phi_south < -limit:
            raise DomainError("region reaches the south pole")
        if spec.branch != AZIMUTHAL and self.phi_north > limit:
            raise DomainError("region reaches the north pole, where this projection is singular")


@dataclass(frozen=True)
class DistortionReport:
    L: float
    ell: float
    v: float
    K_max: float
    witness_L: GeoPoint
    witness_ell: GeoPoint
    grid: dict = field(default_factory=dict)


def _require_interior(spec: ConicSpec, p: GeoPoint) -> None:
    if abs(p.lat) >= math.pi / 2 - POLE_MARGIN:
        raise DomainError("the meridian/parallel frame is singular at the poles")
    _check_scale_domain(spec, p.lat)


def analytic_jacobian(spec: ConicSpec, p: GeoPoint) -> Jacobian:
    _require_interior(spec, p)
    k = float(parallel_scale(spec, p.lat))
    if spec.branch == CYLINDRICAL:
        return Jacobian(0.0, 1.0, k, 0.0)
    theta = spec.n * p.lon
    s, c = math.sin(theta), math.cos(theta)
    # northward shrinks rho; eastward rotates with the cone constant
    return Jacobian(-s, c, k * c, k * s)


def scale_point(spec: ConicSpec, p: GeoPoint) -> ScaleFactors:
    if spec.branch == AZIMUTHAL and p.lat == math.pi / 2:
        k = 1.0
    else:
        k = float(parallel_scale(spec, p.lat))
        _check_scale_domain(spec, p.lat)
    M, m = max(1.0, k), min(1.0, k)
    return ScaleFactors(M=M, m=m, sigma=max(M, 1.0 / m), K=M / m, at=p)


def tissot(spec: ConicSpec, p: GeoPoint) -> TissotEllipse:
    """Image of the unit tangent circle at p under the differential."""
    jac = analytic_jacobian(spec, p)
    k = math.hypot(jac.dx_east, jac.dy_east)
    if abs(k - 1.0) <= CIRCLE_TOL:
        orientation = 0.0
    elif k > 1.0:
        orientation = math.atan2(jac.dy_east, jac.dx_east)
    else:
        orientation = math.atan2(jac.dy_north, jac.dx_north)
    # an axis direction is only defined modulo pi
    orientation = math.remainder(orientation, math.pi)
    if orientation == -math.pi / 2:
        orientation = math.pi / 2
    return TissotEllipse(
        center=forward(spec, p),
        semi_major=max(1.0, k),
        semi_minor=min(1.0, k),
        orientation=orientation,
    )


def sigma_of_k(k):
    k = np.asarray(k, dtype=float)
    return np.maximum(k, 1.0 / k)


def candidate_latitudes(spec: ConicSpec, region: SphericalAnnulus) -> list[float]:
    """Latitudes where sigma can attain its extrema over the region.

    log k is quasi-convex in latitude (its only stationary point is a
    minimum), so the extrema of sigma = exp|log k| sit at the region edges,
    at the standard parallels, or at the minimum of k.
    """
    lo, hi = region.phi_south, region.phi_north
    cands = [lo, hi]
    cands += [p for p in spec.standard_parallels if lo <= p <= hi]
    crit = critical_latitude(spec)
    if lo <= crit <= hi:
        cands.append(crit)
    return sorted(set(cands))


def sigma_profile(spec: ConicSpec, phis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(k, sigma, K) sampled at the given latitudes; sigma equals K here."""
    k = parallel_scale(spec, phis)
    s = sigma_of_k(k)
    return k, s, s.copy()


def extremes_at(spec: ConicSpec, phis) -> tuple[float, float, float, float]:
    """(L, phi_L, ell, phi_ell) over a set of latitudes, ties to the southmost."""
    phis = np.asarray(phis, dtype=float)
    s = sigma_of_k(parallel_scale(spec, phis))
    i_max = int(np.argmax(s))
    i_min = int(np.argmin(s))
    return float(s[i_max]), float(phis[i_max]), float(s[i_min]), float(phis[i_min])


def metrical_distortion(spec: ConicSpec, region: SphericalAnnulus) -> float:
    """v over the region from the candidate latitudes alone (no grid)."""
    L, _, ell, _ = extremes_at(spec, candidate_latitudes(spec, region))
    return math.log(L / ell)


def latitude_grid(region: SphericalAnnulus, grid_step: float) -> np.ndarray:
    count = max(1, math.ceil(region.width / grid_step))
    return np.linspace(region.phi_south, region.phi_north, count + 1)


def analyze_annulus(
    spec: ConicSpec, region: SphericalAnnulus, grid_step: float = DEFAULT_GRID_STEP
) -> DistortionReport:
    """L, ell, v and K_max of spec over the region, with witness points.

    sigma does not depend on longitude, so a latitude scan suffices; the
    analytic candidates make the extrema exact and the uniform grid guards
    against a missed candidate.
    """
    if not grid_step > 0:
        raise ValueError("grid_step must be positive")
    region.check_for(spec)
    grid = latitude_grid(region, grid_step)
    phis = np.union1d(grid, candidate_latitudes(spec, region))
    L, phi_L, ell, phi_ell = extremes_at(spec, phis)
    lon = region.center_lon
    return DistortionReport(
        L=L,
        ell=ell,
        v=math.log(L / ell),
        K_max=L,
        witness_L=GeoPoint(phi_L, lon),
        witness_ell=GeoPoint(phi_ell, lon),
        grid={"grid_step": grid_step, "samples": int(phis.size)},
    )


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    spec: ConicSpec
    report: DistortionReport | None
    error: str | None = None


def compare_specs(
    specs, region: SphericalAnnulus, grid_step: float = DEFAULT_GRID_STEP, labels=None
) -> list[ComparisonRow]:
    """Analyze every spec on one region, ordered by v then K_max.

    Specs that cannot be analyzed on the region stay in the table with their
    error message, after all successful rows.
    """
    specs = list(specs)
    labels = list(labels) if labels is not None else [s.label() for s in specs]
    rows = []
    for spec, label in zip(specs, labels, strict=True):
        try:
            rows.append(ComparisonRow(label, spec, analyze_annulus(spec, region, grid_step)))
        except ValueError as exc:
            rows.append(ComparisonRow(label, spec, None, str(exc)))
    order = sorted(
        range(len(rows)),
        key=lambda i: (
            rows[i].report is None,
            rows[i].report.v if rows[i].report else 0.0,
            rows[i].report.K_max if rows[i].report else 0.0,
            i,
        ),
    )
    return [rows[i] for i in order]
