"""SVG maps: graticule, projected polylines and Tissot ellipse overlays.

Output is a pure function of the inputs.  Coordinates are printed with six
decimals after a uniform scale-to-fit with a 5% margin and a y flip to
screen convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distortion import TissotEllipse, tissot
from .io import Polyline, fmt
from .projection import AZIMUTHAL, CYLINDRICAL, ConicSpec, DomainError, forward_xy
from .sphere import GeoPoint

MARGIN = 0.05
GEOMETRY_TOL = 1e-9
ARC_SAMPLES_PER_DEG = 1


@dataclass(frozen=True)
class RenderConfig:
    graticule_deg: float = 30.0
    tissot_deg: float = 30.0
    tissot_scale: float = 0.05
    canvas_size: float = 1000.0
    lat_min_deg: float = -90.0
    lat_max_deg: float = 90.0
    graticule_class: str = "graticule"
    coast_class: str = "coast"
    tissot_class: str = "tissot"

    def __post_init__(self):
        for name in ("graticule_deg", "tissot_deg"):
            step = getattr(self, name)
            if not step > 0 or not math.isclose(360.0 / step, round(360.0 / step), abs_tol=1e-9):
                raise ValueError(f"{name}={step} must divide 360 evenly")
        if not self.tissot_scale > 0:
            raise ValueError("tissot_scale must be positive")
        if not self.canvas_size > 0:
            raise ValueError("canvas_size must be positive")
        if not -90 <= self.lat_min_deg < self.lat_max_deg <= 90:
            raise ValueError("need -90 <= lat_min_deg < lat_max_deg <= 90")


def _num(value: float) -> str:
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _steps(lo: float, hi: float, step: float, include_hi: bool = True) -> list[float]:
    count = int(math.floor((hi - lo) / step + 1e-9))
    values = [lo + i * step for i in range(count + 1)]
    if not include_hi and values and math.isclose(values[-1], hi):
        values.pop()
    return values


def _in_window(spec: ConicSpec, cfg: RenderConfig, lat: float) -> bool:
    if not math.radians(cfg.lat_min_deg) - 1e-12 <= lat <= math.radians(cfg.lat_max_deg) + 1e-12:
        return False
    return not (spec.is_conic and lat >= spec.C)


def _project(spec: ConicSpec, lat, lon) -> np.ndarray:
    x, y = forward_xy(spec, lat, lon)
    return np.column_stack([np.atleast_1d(x), np.atleast_1d(y)])


def _collinear(points: np.ndarray, through_origin: bool) -> bool:
    a, b, c = points[0], points[len(points) // 2], points[-1]
    span = max(np.linalg.norm(c - a), 1.0)
    cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if abs(cross) > GEOMETRY_TOL * span * span:
        return False
    if through_origin:
        return abs(a[0] * c[1] - a[1] * c[0]) <= GEOMETRY_TOL * span * span
    return True


def _concentric(points: np.ndarray, radius: float) -> bool:
    idx = [0, len(points) // 2, len(points) - 1]
    return all(abs(math.hypot(*points[i]) - radius) <= GEOMETRY_TOL * max(1.0, radius) for i in idx)


class _Canvas:
    def __init__(self, points: np.ndarray, size: float):
        xmin, ymin = points.min(axis=0)
        xmax, ymax = points.max(axis=0)
        extent = max(xmax - xmin, ymax - ymin, 1e-12)
        self.scale = (1 - 2 * MARGIN) * size / extent
        self.margin = MARGIN * size
        self.xmin, self.ymax = float(xmin), float(ymax)
        self.width = self.scale * (xmax - xmin) + 2 * self.margin
        self.height = self.scale * (ymax - ymin) + 2 * self.margin

    def xy(self, x: float, y: float) -> tuple[float, float]:
        return self.margin + (x - self.xmin) * self.scale, self.margin + (self.ymax - y) * self.scale

    def length(self, d: float) -> float:
        return d * self.scale


@dataclass
class _Element:
    kind: str  # "meridian", "parallel", "circle", "line"
    points: np.ndarray
    radius: float = 0.0


def _graticule(spec: ConicSpec, cfg: RenderConfig) -> tuple[list[_Element], int]:
    step = math.radians(cfg.graticule_deg)
    lat_lo, lat_hi = math.radians(cfg.lat_min_deg), math.radians(cfg.lat_max_deg)
    elements: list[_Element] = []
    skipped = 0

    lat_nodes = [
        lat
        for lat in _steps(-math.pi / 2, math.pi / 2, step)
        if lat_lo - 1e-12 <= lat <= lat_hi + 1e-12 and abs(lat) < math.pi / 2 - 1e-12
    ]
    for lat in lat_nodes:
        if not _in_window(spec, cfg, lat):
            skipped += 1
            continue
        count = int(360 * ARC_SAMPLES_PER_DEG)
        lons = np.linspace(-math.pi, math.pi, count + 1)
        pts = _project(spec, np.full_like(lons, lat), lons)
        if spec.branch == CYLINDRICAL:
            elem = _Element("line", pts)
            ok = _collinear(pts, through_origin=False)
        else:
            radius = spec.C - lat
            elem = _Element("circle" if spec.branch == AZIMUTHAL else "parallel", pts, radius)
            ok = radius > 0 and _concentric(pts, radius)
        if ok:
            elements.append(elem)
        else:
            skipped += 1

    top = min(lat_hi, math.pi / 2)
    if spec.is_conic and top >= spec.C:
        top = spec.C - 1e-9
    lats = np.linspace(max(lat_lo, -math.pi / 2), top, 181)
    for lon in _steps(-math.pi, math.pi, step, include_hi=spec.branch == CYLINDRICAL or spec.n < 1):
        pts = _project(spec, lats, np.full_like(lats, lon))
        if _collinear(pts, through_origin=spec.is_conic):
            elements.append(_Element("meridian", pts))
        else:
            skipped += 1
    return elements, skipped


def tissot_grid(cfg: RenderConfig) -> list[GeoPoint]:
    """Ellipse centres on a regular grid, offset half a step from the graticule."""
    step = cfg.tissot_deg
    out = []
    for lat in _steps(cfg.lat_min_deg + step / 2, cfg.lat_max_deg, step):
        if abs(lat) >= 90:
            continue
        for lon in _steps(-180 + step / 2, 180, step, include_hi=False):
            out.append(GeoPoint.from_degrees(lat, lon))
    return out


def _split_polyline(spec: ConicSpec, cfg: RenderConfig, line: Polyline) -> list[np.ndarray]:
    """Projected runs of in-domain vertices; a run breaks at bad vertices and at the cut."""
    runs: list[list[tuple[float, float]]] = [[]]
    prev_lon = None
    for p in line.points:
        if not _in_window(spec, cfg, p.lat):
            runs.append([])
            prev_lon = None
            continue
        if prev_lon is not None and abs(p.lon - prev_lon) > math.pi:
            runs.append([])
        x, y = forward_xy(spec, p.lat, p.lon)
        runs[-1].append((float(x), float(y)))
        prev_lon = p.lon
    return [np.array(r) for r in runs if len(r) >= 2]


def render_svg(
    spec: ConicSpec,
    lines: list[Polyline] = (),
    cfg: RenderConfig | None = None,
    tissot_points: list[GeoPoint] | None = None,
) -> str:
    cfg = cfg or RenderConfig()
    graticule, skipped = _graticule(spec, cfg)
    runs = [(line.id, run) for line in lines for run in _split_polyline(spec, cfg, line)]

    ellipses: list[tuple[GeoPoint, TissotEllipse]] = []
    for p in tissot_points or ():
        if not _in_window(spec, cfg, p.lat):
            skipped += 1
            continue
        try:
            ellipses.append((p, tissot(spec, p)))
        except DomainError:
            skipped += 1

    extent_pts = [e.points for e in graticule] + [r for _, r in runs]
    if not extent_pts:
        raise ValueError("nothing to draw")
    canvas = _Canvas(np.vstack(extent_pts), cfg.canvas_size)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(canvas.width)}" '
        f'height="{_num(canvas.height)}" viewBox="0 0 {_num(canvas.width)} {_num(canvas.height)}">',
        f"<!-- projection: {spec.label()} -->",
        f"<!-- canvas: X = {_num(canvas.margin)} + (x - {fmt(canvas.xmin)}) * {fmt(canvas.scale)}; "
        f"Y = {_num(canvas.margin)} + ({fmt(canvas.ymax)} - y) * {fmt(canvas.scale)} (y flipped) -->",
        f"<!-- skipped elements: {skipped} -->",
        f'<g class="{cfg.graticule_class}" fill="none" stroke="#999" stroke-width="0.5">',
    ]
    cx0, cy0 = canvas.xy(0.0, 0.0)
    for elem in graticule:
        if elem.kind == "circle":
            out.append(
                f'<circle class="parallel" cx="{_num(cx0)}" cy="{_num(cy0)}" r="{_num(canvas.length(elem.radius))}"/>'
            )
        elif elem.kind == "parallel":
            x0, y0 = canvas.xy(*elem.points[0])
            x1, y1 = canvas.xy(*elem.points[-1])
            r = _num(canvas.length(elem.radius))
            large = 1 if 2 * math.pi * spec.n > math.pi else 0
            # sweep from the west end to the east end; counter-clockwise on screen
            out.append(
                f'<path class="parallel" d="M {_num(x0)} {_num(y0)} A {r} {r} 0 {large} 0 {_num(x1)} {_num(y1)}"/>'
            )
        else:
            x0, y0 = canvas.xy(*elem.points[0])
            x1, y1 = canvas.xy(*elem.points[-1])
            cls = "meridian" if elem.kind == "meridian" else "parallel"
            out.append(f'<line class="{cls}" x1="{_num(x0)}" y1="{_num(y0)}" x2="{_num(x1)}" y2="{_num(y1)}"/>')
    out.append("</g>")

    out.append(f'<g class="{cfg.coast_class}" fill="none" stroke="#036" stroke-width="1">')
    for pid, run in runs:
        coords = " ".join(f"{_num(a)},{_num(b)}" for a, b in (canvas.xy(*pt) for pt in run))
        out.append(f'<polyline data-id="{pid}" points="{coords}"/>')
    out.append("</g>")

    if ellipses:
        out.append(f'<g class="{cfg.tissot_class}" fill="#c33" fill-opacity="0.4" stroke="#c33">')
        for p, e in ellipses:
            cx, cy = canvas.xy(e.center.x, e.center.y)
            rx = canvas.length(e.semi_major * cfg.tissot_scale)
            ry = canvas.length(e.semi_minor * cfg.tissot_scale)
            angle = -math.degrees(e.orientation)
            out.append(
                f'<ellipse cx="{_num(cx)}" cy="{_num(cy)}" rx="{_num(rx)}" ry="{_num(ry)}" '
                f'transform="rotate({_num(angle)} {_num(cx)} {_num(cy)})" '
                f'data-lat="{fmt(p.lat_deg)}" data-lon="{fmt(p.lon_deg)}" '
                f'data-semi-major="{fmt(e.semi_major)}" data-semi-minor="{fmt(e.semi_minor)}" '
                f'data-orientation="{fmt(e.orientation)}"/>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
