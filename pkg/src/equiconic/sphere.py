"""Spherical geometry on the unit sphere: distances, midpoints, triangles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# pairwise vertex distances outside (DEGENERATE_EPS, pi - DEGENERATE_EPS) are rejected
DEGENERATE_EPS = 1e-9


def normalize_lon(lon: float) -> float:
    """Wrap a longitude into (-pi, pi]."""
    wrapped = math.remainder(lon, 2 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2 * math.pi
    return wrapped


@dataclass(frozen=True)
class GeoPoint:
    """A position on the unit sphere, angles in radians."""

    lat: float
    lon: float

    def __post_init__(self):
        lat = float(self.lat)
        lon = float(self.lon)
        if not (math.isfinite(lat) and math.isfinite(lon)):
            raise ValueError(f"non-finite coordinates ({lat}, {lon})")
        if abs(lat) > math.pi / 2:
            raise ValueError(f"latitude {math.degrees(lat):.6f} deg outside [-90, 90]")
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", normalize_lon(lon))

    @classmethod
    def from_degrees(cls, lat_deg: float, lon_deg: float) -> "GeoPoint":
        return cls(math.radians(lat_deg), math.radians(lon_deg))

    @classmethod
    def from_vector(cls, v) -> "GeoPoint":
        x, y, z = v
        return cls(math.atan2(z, math.hypot(x, y)), math.atan2(y, x))

    def to_vector(self) -> np.ndarray:
        c = math.cos(self.lat)
        return np.array([c * math.cos(self.lon), c * math.sin(self.lon), math.sin(self.lat)])

    @property
    def lat_deg(self) -> float:
        return math.degrees(self.lat)

    @property
    def lon_deg(self) -> float:
        return math.degrees(self.lon)


def _cross_norm(u, v) -> float:
    # plain floats: np.cross on single 3-vectors is dominated by call overhead
    return math.hypot(u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u, v) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _angle_between(u, v) -> float:
    return math.atan2(_cross_norm(u, v), _dot(u, v))


def geodesic_distance(p: GeoPoint, q: GeoPoint) -> float:
    """Central angle between two points, in [0, pi]."""
    return _angle_between(p.to_vector(), q.to_vector())


def midpoint(p: GeoPoint, q: GeoPoint) -> GeoPoint:
    """Midpoint of the shorter great-circle arc from p to q."""
    s = p.to_vector() + q.to_vector()
    norm = float(np.linalg.norm(s))
    if norm < 1e-12:
        raise ValueError("antipodal points have no unique midpoint")
    return GeoPoint.from_vector(s / norm)


@dataclass(frozen=True)
class SphericalTriangle:
    a: GeoPoint
    b: GeoPoint
    c: GeoPoint

    def __post_init__(self):
        for name, (p, q) in {"ab": (self.a, self.b), "bc": (self.b, self.c), "ca": (self.c, self.a)}.items():
            d = geodesic_distance(p, q)
            if not DEGENERATE_EPS < d < math.pi - DEGENERATE_EPS:
                raise ValueError(f"degenerate triangle: side {name} has length {d!r}")

    def sides(self) -> tuple[float, float, float]:
        """Side lengths opposite a, b, c."""
        return (
            geodesic_distance(self.b, self.c),
            geodesic_distance(self.c, self.a),
            geodesic_distance(self.a, self.b),
        )


@dataclass(frozen=True)
class TriangleAngles:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not 0 < value < math.pi:
                raise ValueError(f"{name} = {value!r} outside (0, pi)")

    @property
    def total(self) -> float:
        return self.alpha + self.beta + self.gamma

    @property
    def excess(self) -> float:
        return self.total - math.pi


def triangle_angles(t: SphericalTriangle) -> TriangleAngles:
    """Interior angles at the vertices a, b, c."""
    va, vb, vc = t.a.to_vector(), t.b.to_vector(), t.c.to_vector()

    def vertex_angle(p, q, r):
        # tangent directions from differences keep full relative precision on tiny triangles
        u = (q - p) - _dot(p, q - p) * p
        w = (r - p) - _dot(p, r - p) * p
        return _angle_between(u, w)

    angles = (vertex_angle(va, vb, vc), vertex_angle(vb, vc, va), vertex_angle(vc, va, vb))
    if not all(0 < x < math.pi for x in angles):
        raise ValueError("degenerate triangle: an angle collapsed to 0 or pi")
    return TriangleAngles(*angles)


def solve_sides_from_angles(angles: TriangleAngles) -> tuple[float, float, float]:
    """Side lengths (opposite alpha, beta, gamma) of the triangle with given angles.

    Uses the half-side form of the polar cosine rule, which stays accurate for
    small sides where the plain arccosine does not.
    """
    a, b, c = angles.alpha, angles.beta, angles.gamma
    if a + b + c <= math.pi:
        raise ValueError(
            f"not a spherical triangle: angle sum {math.degrees(a + b + c):.6f} deg "
            "does not exceed 180 deg"
        )
    s = (a + b + c) / 2
    neg_cos_s = -math.cos(s)
    cs = (math.cos(s - a), math.cos(s - b), math.cos(s - c))
    if neg_cos_s <= 0 or min(cs) <= 0:
        raise ValueError("not a spherical triangle: the polar triangle violates the triangle inequality")

    def side(opposite_idx):
        others = [cs[i] for i in range(3) if i != opposite_idx]
        return 2 * math.atan2(math.sqrt(neg_cos_s * cs[opposite_idx]), math.sqrt(others[0] * others[1]))

    return side(0), side(1), side(2)


def prop27_ratio(t: SphericalTriangle) -> float:
    """Ratio DE / (AC / 2) with D, E the midpoints of AB and BC.

    Always exceeds 1 on the sphere; tends to 1 as the triangle shrinks.
    """
    d = midpoint(t.a, t.b)
    e = midpoint(t.b, t.c)
    return geodesic_distance(d, e) / (geodesic_distance(t.a, t.c) / 2)


def random_points(rng: np.random.Generator, count: int) -> list[GeoPoint]:
    """Points uniformly distributed on the sphere."""
    z = rng.uniform(-1.0, 1.0, count)
    lon = rng.uniform(-math.pi, math.pi, count)
    return [GeoPoint(math.asin(zi), li) for zi, li in zip(z, lon)]


def random_triangles(rng: np.random.Generator, count: int) -> list[SphericalTriangle]:
    """Uniformly sampled vertex triples, rejecting degenerate ones."""
    out = []
    while len(out) < count:
        a, b, c = random_points(rng, 3)
        try:
            t = SphericalTriangle(a, b, c)
            triangle_angles(t)
        except ValueError:
            continue
        out.append(t)
    return out
