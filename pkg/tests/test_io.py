import csv
import math

import pytest

from equiconic.distortion import SphericalAnnulus, analyze_annulus, compare_specs
from equiconic.io import (
    REPORT_HEADER,
    InputError,
    Polyline,
    fmt,
    format_report_csv,
    read_points,
    read_polylines,
    sample_coastline_path,
    write_report_csv,
)
from equiconic.projection import (
    build_azimuthal,
    build_conic_one_parallel,
    build_conic_two_parallels,
    build_cylindrical,
)

from conftest import deg


def write(tmp_path, text, name="in.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.mark.parametrize(
    "text, expected",
    [
        ("lon_deg,lat_deg\n0,0\n", [(0.0, 0.0)]),
        ("lon_deg,lat_deg\n200,10\n", [(-160.0, 10.0)]),
        ("lon_deg,lat_deg\n-180,0\n180,0\n", [(180.0, 0.0), (180.0, 0.0)]),
        ("# comment\nlon_deg, lat_deg\n\n 12.5 , -33.25\n", [(12.5, -33.25)]),
    ],
)
def test_read_points(tmp_path, text, expected):
    pts = read_points(write(tmp_path, text))
    assert [(p.lon_deg, p.lat_deg) for p in pts] == pytest.approx(expected)


@pytest.mark.parametrize(
    "text, line, match",
    [
        ("lon_deg,lat_deg\n0,95\n", 2, "latitude"),
        ("lon_deg,lat_deg\n0,0\n1,x\n", 3, "not a number"),
        ("lon_deg,lat_deg\n0,0\n1,2,3\n", 3, "expected 2 fields"),
        ("lon_deg,lat_deg\nnan,0\n", 2, "non-finite"),
        ("lat_deg,lon_deg\n0,0\n", 1, "expected header"),
    ],
)
def test_read_points_errors(tmp_path, text, line, match):
    with pytest.raises(InputError, match=match) as info:
        read_points(write(tmp_path, text))
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_read_points_empty(tmp_path):
    with pytest.raises(InputError, match="empty file"):
        read_points(write(tmp_path, ""))


def test_read_polylines(tmp_path):
    lines = read_polylines(write(tmp_path, "id,lon_deg,lat_deg\na,0,0\na,1,1\nb,5,5\nb,6,5\nb,7,6\n"))
    assert [l.id for l in lines] == ["a", "b"]
    assert [len(l.points) for l in lines] == [2, 3]
    assert lines[1].points[2] == deg(6, 7)


def test_polyline_single_point_names_id(tmp_path):
    with pytest.raises(ValueError, match="'b'"):
        read_polylines(write(tmp_path, "id,lon_deg,lat_deg\na,0,0\na,1,1\nb,5,5\n"))


def test_polyline_ids_must_be_contiguous(tmp_path):
    with pytest.raises(InputError, match="not contiguous") as info:
        read_polylines(write(tmp_path, "id,lon_deg,lat_deg\na,0,0\nb,1,1\na,2,2\nb,3,3\n"))
    assert info.value.line == 4


def test_polyline_invariants():
    with pytest.raises(ValueError, match="fewer than 2"):
        Polyline("x", (deg(0, 0),))
    with pytest.raises(ValueError, match="repeats"):
        Polyline("x", (deg(0, 0), deg(0, 0), deg(1, 1)))


def test_sample_coastline_matches_header():
    path = sample_coastline_path()
    header = [l for l in path.read_text().splitlines() if l.startswith("# polylines:")]
    assert len(header) == 1
    counts = dict(part.strip().split(": ") for part in header[0].lstrip("# ").split(","))
    lines = read_polylines(path)
    assert len(lines) == int(counts["polylines"]) == 19
    assert sum(len(l.points) for l in lines) == int(counts["points"]) == 497


def test_fmt_is_locale_free_and_round_trips():
    for value in (math.pi, -1e-300, 12345678.9, 0.1):
        text = fmt(value)
        assert "," not in text
        assert float(text) == pytest.approx(value, rel=1e-11)


REGION = SphericalAnnulus.from_degrees(40, 70)
STEP = math.radians(0.05)


def parse_report(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == REPORT_HEADER
    return rows[1:]


def test_single_report(tmp_path):
    report = analyze_annulus(build_conic_two_parallels(math.radians(45), math.radians(66)), REGION, STEP)
    path = tmp_path / "r.csv"
    write_report_csv(report, path)
    (row,) = parse_report(path)
    values = [float(x) for x in row[1:]]
    expected = [report.L, report.ell, report.v, report.K_max, report.witness_L.lat_deg, report.witness_ell.lat_deg]
    for got, want in zip(values, expected):
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_comparison_table(tmp_path):
    specs = [
        build_cylindrical(0.0),
        build_azimuthal(),
        build_conic_one_parallel(math.radians(55)),
        build_conic_two_parallels(math.radians(45), math.radians(66)),
    ]
    rows = compare_specs(specs, REGION, STEP)
    path = tmp_path / "table.csv"
    write_report_csv(rows, path)
    parsed = parse_report(path)
    assert len(parsed) == 4
    vs = [float(r[3]) for r in parsed]
    assert vs == sorted(vs)
    assert [r[0] for r in parsed] == [row.label for row in rows]
    for r, row in zip(parsed, rows):
        assert abs(float(r[3]) - row.report.v) < 1e-10


def test_format_matches_written(tmp_path):
    report = analyze_annulus(build_azimuthal(), REGION, STEP)
    path = tmp_path / "r.csv"
    write_report_csv(report, path)
    assert path.read_text() == format_report_csv(report)


def test_unwritable_path(tmp_path):
    report = analyze_annulus(build_azimuthal(), REGION, STEP)
    with pytest.raises(OSError, match="cannot write report"):
        write_report_csv(report, tmp_path / "missing" / "r.csv")
