"""CSV input of points and polylines, CSV output of distortion reports."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .distortion import ComparisonRow, DistortionReport
from .sphere import GeoPoint

POINT_HEADER = ["lon_deg", "lat_deg"]
POLYLINE_HEADER = ["id", "lon_deg", "lat_deg"]
REPORT_HEADER = ["label", "L", "ell", "v", "K_max", "witness_L_phi_deg", "witness_ell_phi_deg"]


class InputError(ValueError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Polyline:
    id: str
    points: tuple[GeoPoint, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError(f"polyline {self.id!r} has fewer than 2 points")
        for p, q in zip(self.points, self.points[1:]):
            if p == q:
                raise ValueError(f"polyline {self.id!r} repeats a point consecutively")


def fmt(value: float, digits: int = 12) -> str:
    """Locale-independent text for a float with the given significant digits."""
    return format(value, f".{digits}g")


def _rows(path):
    """(line_number, fields) for non-blank, non-comment lines."""
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            yield lineno, next(csv.reader([stripped]))


def _parse_point(lon_text: str, lat_text: str, lineno: int) -> GeoPoint:
    try:
        lon, lat = float(lon_text), float(lat_text)
    except ValueError:
        raise InputError(f"not a number: {lon_text!r}, {lat_text!r}", lineno) from None
    if not (math.isfinite(lon) and math.isfinite(lat)):
        raise InputError("non-finite coordinate", lineno)
    if abs(lat) > 90:
        raise InputError(f"latitude {lat} outside [-90, 90]", lineno)
    return GeoPoint.from_degrees(lat, lon)


def _read_with_header(path, header):
    rows = _rows(path)
    first = next(rows, None)
    if first is None:
        raise InputError(f"empty file, expected header {','.join(header)}")
    lineno, fields = first
    if [f.strip() for f in fields] != header:
        raise InputError(f"expected header {','.join(header)}", lineno)
    for lineno, fields in rows:
        if len(fields) != len(header):
            raise InputError(f"expected {len(header)} fields, got {len(fields)}", lineno)
        yield lineno, [f.strip() for f in fields]


def iter_points(path):
    """(line_number, GeoPoint) for each data row of a ``lon_deg,lat_deg`` file."""
    for lineno, (lon, lat) in _read_with_header(path, POINT_HEADER):
        yield lineno, _parse_point(lon, lat, lineno)


def read_points(path) -> list[GeoPoint]:
    return [p for _, p in iter_points(path)]


def iter_xy(path):
    """(line_number, (x, y)) for each data row of an ``x,y`` file."""
    for lineno, (x, y) in _read_with_header(path, ["x", "y"]):
        try:
            yield lineno, (float(x), float(y))
        except ValueError:
            raise InputError(f"not a number: {x!r}, {y!r}", lineno) from None


def read_polylines(path) -> list[Polyline]:
    """Polylines from rows grouped by contiguous ``id`` values."""
    groups: list[tuple[str, list[GeoPoint]]] = []
    seen: set[str] = set()
    for lineno, (pid, lon, lat) in _read_with_header(path, POLYLINE_HEADER):
        point = _parse_point(lon, lat, lineno)
        if groups and groups[-1][0] == pid:
            groups[-1][1].append(point)
            continue
        if pid in seen:
            raise InputError(f"rows of polyline {pid!r} are not contiguous", lineno)
        seen.add(pid)
        groups.append((pid, [point]))
    return [Polyline(pid, tuple(points)) for pid, points in groups]


def sample_coastline_path() -> Path:
    """Bundled coarse world coastline (Natural Earth, public domain)."""
    return Path(str(resources.files("equiconic") / "data" / "coastline.csv"))


def report_rows(report) -> list[list[str]]:
    if isinstance(report, DistortionReport):
        items = [("report", report)]
    else:
        items = []
        for row in report:
            if isinstance(row, ComparisonRow):
                if row.report is not None:
                    items.append((row.label, row.report))
            else:
                items.append(row)
    out = []
    for label, r in items:
        out.append(
            [
                label,
                fmt(r.L),
                fmt(r.ell),
                fmt(r.v),
                fmt(r.K_max),
                fmt(r.witness_L.lat_deg),
                fmt(r.witness_ell.lat_deg),
            ]
        )
    return out


def format_report_csv(report) -> str:
    """CSV text for a report or comparison table; failed comparison rows are skipped."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    writer.writerows(report_rows(report))
    return buf.getvalue()


def write_report_csv(report, path) -> None:
    text = format_report_csv(report)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc
