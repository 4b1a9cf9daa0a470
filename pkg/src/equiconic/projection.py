"""Equidistant projections with straight meridians and true meridian scale.

Conic members map (lat, lon) to polar coordinates about the apex,
``rho = C - lat`` and ``theta = n * lon``, then to the plane with the apex at
the origin and the central meridian along the negative y-axis.  The azimuthal
projection is the conic member with ``n = 1, C = pi/2``.  The equidistant
cylindrical projection is kept as its own branch: ``x = lon * cos(phi_s)``,
``y = lat``.

All lengths are in units of the sphere radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .sphere import GeoPoint

CONIC = "conic"
AZIMUTHAL = "azimuthal"
CYLINDRICAL = "cylindrical"

Branch = Literal["conic", "azimuthal", "cylindrical"]

# parallels closer than this are treated as one tangent parallel
COINCIDENT_GAP = 1e-8

RHODES_LAT = math.radians(36.0)
THULE_LAT = math.radians(63.0)


class DomainError(ValueError):
    """A point or parameter lies outside the region a projection can handle."""


@dataclass(frozen=True)
class ConicSpec:
    branch: Branch
    n: float | None = None
    C: float | None = None
    phi_s: float | None = None
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.branch in (CONIC, AZIMUTHAL):
            if self.n is None or self.C is None or self.phi_s is not None:
                raise ValueError(f"{self.branch} spec needs n and C only")
            if not (0 < self.n <= 1 and self.C > 0 and math.isfinite(self.C)):
                raise ValueError(f"invalid cone parameters n={self.n!r}, C={self.C!r}")
            if self.branch == AZIMUTHAL and (self.n != 1.0 or self.C != math.pi / 2):
                raise ValueError("azimuthal spec is exactly n=1, C=pi/2")
        elif self.branch == CYLINDRICAL:
            if self.phi_s is None or self.n is not None or self.C is not None:
                raise ValueError("cylindrical spec needs phi_s only")
            if not abs(self.phi_s) < math.pi / 2:
                raise ValueError(f"standard parallel {self.phi_s!r} must satisfy |phi_s| < pi/2")
        else:
            raise ValueError(f"unknown branch {self.branch!r}")

    @property
    def is_conic(self) -> bool:
        """True for the conic and azimuthal branches (apex-centred geometry)."""
        return self.branch in (CONIC, AZIMUTHAL)

    @property
    def standard_parallels(self) -> tuple[float, ...]:
        """Latitudes where the parallel scale is exactly 1."""
        p = self.provenance
        if self.branch == CYLINDRICAL:
            return (self.phi_s, -self.phi_s) if self.phi_s else (0.0,)
        if self.branch == AZIMUTHAL:
            return (math.pi / 2,)
        if "phi1" in p:
            return (p["phi1"], p["phi2"])
        if "phi0" in p:
            return (p["phi0"],)
        return ()

    def label(self) -> str:
        p = self.provenance
        if self.branch == AZIMUTHAL:
            return "azimuthal"
        if self.branch == CYLINDRICAL:
            return f"cylindrical({math.degrees(self.phi_s):.6f})"
        if "phi1" in p:
            return f"conic2({math.degrees(p['phi1']):.6f},{math.degrees(p['phi2']):.6f})"
        if "phi0" in p:
            return f"conic1({math.degrees(p['phi0']):.6f})"
        return f"conic(n={self.n:.12g},C={self.C:.12g})"


def build_conic_two_parallels(phi1: float, phi2: float) -> ConicSpec:
    """Cone with true scale on two parallels (and on every meridian)."""
    if not -math.pi / 2 < phi1 < math.pi / 2 or not -math.pi / 2 < phi2 < math.pi / 2:
        raise ValueError("standard parallels must lie strictly between the poles")
    if phi1 >= phi2:
        raise ValueError(f"need phi1 < phi2, got {phi1!r} >= {phi2!r}")
    gap = phi2 - phi1
    if gap < COINCIDENT_GAP:
        return build_conic_one_parallel((phi1 + phi2) / 2)
    # (cos phi1 - cos phi2) / gap without cancellation
    n = math.sin((phi1 + phi2) / 2) * math.sin(gap / 2) / (gap / 2)
    if not 0 < n <= 1:
        raise ValueError(
            f"parallels {math.degrees(phi1):.6f}, {math.degrees(phi2):.6f} deg give cone constant "
            f"{n:.6g} outside (0, 1]"
        )
    C = phi1 + math.cos(phi1) / n
    return ConicSpec(CONIC, n=n, C=C, provenance={"phi1": phi1, "phi2": phi2})


def build_conic_one_parallel(phi0: float) -> ConicSpec:
    """Cone tangent to the sphere along one parallel."""
    if phi0 == 0:
        raise ValueError("no tangent cone at the equator; use the cylindrical projection")
    if abs(phi0) >= math.pi / 2:
        raise ValueError("tangent parallel at a pole; use the azimuthal projection")
    if phi0 < 0:
        raise ValueError("southern tangent cones (negative cone constant) are not supported")
    n = math.sin(phi0)
    return ConicSpec(CONIC, n=n, C=phi0 + math.cos(phi0) / n, provenance={"phi0": phi0})


def build_azimuthal() -> ConicSpec:
    return ConicSpec(AZIMUTHAL, n=1.0, C=math.pi / 2, provenance={})


def build_cylindrical(phi_s: float = 0.0) -> ConicSpec:
    return ConicSpec(CYLINDRICAL, phi_s=phi_s, provenance={"phis": phi_s})


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite plane point ({self.x}, {self.y})")


def forward_xy(spec: ConicSpec, lat, lon):
    """Vectorised forward transform on raw radian arrays (no domain checks)."""
    lat = np.asarray(lat, dtype=float)
    lon = np.asarray(lon, dtype=float)
    if spec.branch == CYLINDRICAL:
        return lon * math.cos(spec.phi_s), lat + 0.0 * lon
    rho = spec.C - lat
    theta = spec.n * lon
    return rho * np.sin(theta), -rho * np.cos(theta)


def forward(spec: ConicSpec, p: GeoPoint) -> PlanePoint:
    # only the azimuthal apex is itself the image of a point (the pole)
    if spec.is_conic and (p.lat > spec.C or (p.lat == spec.C and spec.branch != AZIMUTHAL)):
        raise DomainError(f"latitude {p.lat_deg:.6f} deg is beyond the apex")
    x, y = forward_xy(spec, p.lat, p.lon)
    return PlanePoint(float(x), float(y))


def inverse(spec: ConicSpec, q: PlanePoint) -> GeoPoint:
    if spec.branch == CYLINDRICAL:
        lon = q.x / math.cos(spec.phi_s)
        if abs(lon) > math.pi or abs(q.y) > math.pi / 2:
            raise DomainError(f"({q.x}, {q.y}) is outside the map image")
        return GeoPoint(q.y, lon)
    rho = math.hypot(q.x, q.y)
    if rho == 0:
        if spec.branch == AZIMUTHAL:
            return GeoPoint(math.pi / 2, 0.0)
        raise DomainError("the apex is not the image of any point")
    lon = math.atan2(q.x, -q.y) / spec.n
    lat = spec.C - rho
    if abs(lon) > math.pi or abs(lat) > math.pi / 2:
        raise DomainError(f"({q.x}, {q.y}) is outside the map image")
    if lon == -math.pi:
        lon = math.pi
    return GeoPoint(lat, lon)


def parallel_scale(spec: ConicSpec, phi):
    """Parallel scale k at latitude(s) phi; accepts scalars or arrays."""
    phi = np.asarray(phi, dtype=float)
    if spec.branch == CYLINDRICAL:
        return math.cos(spec.phi_s) / np.cos(phi)
    if spec.branch == AZIMUTHAL:
        # colatitude / sin(colatitude), finite at the pole
        return 1.0 / np.sinc((math.pi / 2 - phi) / math.pi)
    return spec.n * (spec.C - phi) / np.cos(phi)


def _check_scale_domain(spec: ConicSpec, phi: float) -> None:
    if spec.branch == AZIMUTHAL:
        if not -math.pi / 2 < phi <= math.pi / 2:
            raise DomainError(f"latitude {math.degrees(phi):.6f} deg outside the azimuthal domain")
        return
    if not abs(phi) < math.pi / 2:
        raise DomainError(f"parallel scale is unbounded at latitude {math.degrees(phi):.6f} deg")
    if spec.is_conic and phi >= spec.C:
        raise DomainError(f"latitude {math.degrees(phi):.6f} deg is beyond the apex")


def scale_factors_meridian_parallel(spec: ConicSpec, phi: float) -> tuple[float, float]:
    """(h, k): meridian scale (always 1) and parallel scale at latitude phi."""
    _check_scale_domain(spec, phi)
    return 1.0, float(parallel_scale(spec, phi))


def apex_colatitude(spec: ConicSpec) -> float:
    """Angular distance beyond the pole at which the meridian images meet."""
    if not spec.is_conic:
        raise ValueError("apex colatitude is only defined for conic projections")
    return spec.C - math.pi / 2


def rhodes_diagnostic(spec: ConicSpec, phi_rhodes: float = RHODES_LAT) -> tuple[float, float]:
    """(map_ratio, true_ratio) of parallel to meridian degree at phi_rhodes."""
    if not spec.is_conic:
        raise ValueError("rhodes diagnostic needs a conic projection")
    if not abs(phi_rhodes) < math.pi / 2 or phi_rhodes >= spec.C:
        raise DomainError(f"latitude {math.degrees(phi_rhodes):.6f} deg outside the domain")
    return spec.n * (spec.C - phi_rhodes), math.cos(phi_rhodes)


def critical_latitude(spec: ConicSpec) -> float:
    """Latitude where the parallel scale attains its minimum.

    For the conic family this is the root of ``(C - phi) sin(phi) = cos(phi)``,
    which is unique because the left minus right side is increasing on
    (-pi/2, pi/2).  The cylindrical minimum is the equator and the azimuthal
    one the pole.
    """
    if spec.branch == CYLINDRICAL:
        return 0.0
    if spec.branch == AZIMUTHAL:
        return math.pi / 2
    C = spec.C
    lo, hi = -math.pi / 2, math.pi / 2
    x = math.atan(1.0 / C)
    for _ in range(100):
        g = (C - x) * math.sin(x) - math.cos(x)
        if g > 0:
            hi = x
        else:
            lo = x
        dg = (C - x) * math.cos(x)
        step = g / dg if dg > 0 else math.inf
        nxt = x - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 1e-16 * max(1.0, abs(x)) or hi - lo <= 1e-16:
            return nxt
        x = nxt
    return x
