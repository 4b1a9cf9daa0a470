"""Command-line driver.  Degrees at the boundary, radians everywhere else."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io, render
from .distortion import (
    SphericalAnnulus,
    analyze_annulus,
    compare_specs,
    latitude_grid,
    candidate_latitudes,
    sigma_profile,
    tissot,
)
from .optimize import optimize_cylindrical, optimize_one_parallel, optimize_two_parallels
from .projection import (
    PlanePoint,
    build_azimuthal,
    build_conic_one_parallel,
    build_conic_two_parallels,
    build_cylindrical,
    forward,
    inverse,
)
from .sphere import TriangleAngles, solve_sides_from_angles

FAMILIES = ("conic1", "conic2", "azimuthal", "cylindrical")
FAMILY_FLAGS = {"conic1": {"phi0"}, "conic2": {"phi1", "phi2"}, "azimuthal": set(), "cylindrical": {"phis"}}
PARAM_FLAGS = ("phi0", "phi1", "phi2", "phis")
OPTIMIZERS = {
    "conic1": optimize_one_parallel,
    "conic2": optimize_two_parallels,
    "cylindrical": optimize_cylindrical,
}


@dataclass
class CommandSpec:
    command: str
    family: str | None = None
    params: dict = field(default_factory=dict)  # radians
    families: list[str] = field(default_factory=list)
    region: SphericalAnnulus | None = None
    grid_step: float = math.radians(0.01)
    coarse_step: float = math.radians(0.25)
    optimize: bool = False
    angles: tuple[float, float, float] | None = None
    input: str | None = None
    out: str | None = None
    dump_profile: str | None = None
    trace: str | None = None
    map: str | None = None
    render_config: render.RenderConfig | None = None


def _add_projection_flags(p: argparse.ArgumentParser, families=FAMILIES) -> None:
    p.add_argument("--family", choices=families)
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", type=float, metavar="DEG")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equiconic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("project", "lon/lat CSV to x,y CSV"), ("invert", "x,y CSV to lon/lat CSV")):
        p = sub.add_parser(name, help=helptext)
        _add_projection_flags(p)
        p.add_argument("input")
        p.add_argument("--out")

    p = sub.add_parser("tissot", help="Tissot ellipses at the points of a lon/lat CSV")
    _add_projection_flags(p)
    p.add_argument("input")
    p.add_argument("--out")

    p = sub.add_parser("analyze", help="distortion of one projection over a band")
    _add_projection_flags(p)
    p.add_argument("--annulus", required=True, metavar="S:N")
    p.add_argument("--grid-step", type=float, default=0.01, metavar="DEG")
    p.add_argument("--dump-profile", metavar="PATH")

    p = sub.add_parser("optimize", help="best standard parallels for a band")
    _add_projection_flags(p, families=tuple(OPTIMIZERS))
    p.add_argument("--annulus", required=True, metavar="S:N")
    p.add_argument("--coarse-step", type=float, default=0.25, metavar="DEG")
    p.add_argument("--trace", metavar="PATH")

    p = sub.add_parser("compare", help="rank several projections by metrical distortion")
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", type=float, metavar="DEG")
    p.add_argument("--families", required=True)
    p.add_argument("--annulus", required=True, metavar="S:N")
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--grid-step", type=float, default=0.01, metavar="DEG")
    p.add_argument("--coarse-step", type=float, default=0.25, metavar="DEG")
    p.add_argument("--out")

    p = sub.add_parser("render", help="SVG map with graticule and optional Tissot ellipses")
    _add_projection_flags(p)
    p.add_argument("--map", metavar="CSV", help="polyline CSV; 'sample' for the bundled coastline")
    p.add_argument("--graticule", type=float, default=30.0, metavar="DEG")
    p.add_argument("--tissot", type=float, metavar="DEG")
    p.add_argument("--tissot-scale", type=float, default=0.05)
    p.add_argument("--lat-min", type=float, default=-90.0, metavar="DEG")
    p.add_argument("--lat-max", type=float, default=90.0, metavar="DEG")
    p.add_argument("--out", required=True)

    p = sub.add_parser("triangle", help="sides of the spherical triangle with given angles")
    p.add_argument("--angles", required=True, metavar="A,B,C")
    return parser


def _parse_annulus(parser, text: str) -> SphericalAnnulus:
    try:
        south, north = (float(v) for v in text.split(":"))
    except ValueError:
        parser.error(f"--annulus expects S:N in degrees, got {text!r}")
    if not south < north:
        parser.error(f"--annulus needs south < north, got {text!r}")
    if not (-90 <= south and north <= 90):
        parser.error(f"--annulus bounds must lie in [-90, 90], got {text!r}")
    return SphericalAnnulus.from_degrees(south, north)


def _check_family_flags(parser, args, family: str) -> dict:
    given = {name for name in PARAM_FLAGS if getattr(args, name, None) is not None}
    allowed = FAMILY_FLAGS[family]
    extra = given - allowed
    if extra:
        parser.error(f"--family {family} does not take " + ", ".join(f"--{n}" for n in sorted(extra)))
    missing = allowed - given - {"phis"}
    if missing:
        parser.error(f"--family {family} requires " + ", ".join(f"--{n}" for n in sorted(missing)))
    return {name: math.radians(getattr(args, name)) for name in given}


def parse_args(argv=None) -> CommandSpec:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cmd = CommandSpec(command=args.command)

    if args.command == "triangle":
        try:
            a, b, c = (math.radians(float(v)) for v in args.angles.split(","))
        except ValueError:
            parser.error(f"--angles expects three comma-separated degrees, got {args.angles!r}")
        cmd.angles = (a, b, c)
        return cmd

    if args.command == "compare":
        families = [f.strip() for f in args.families.split(",") if f.strip()]
        unknown = [f for f in families if f not in FAMILIES]
        if not families or unknown:
            parser.error(f"--families must list members of {', '.join(FAMILIES)}")
        given = {name for name in PARAM_FLAGS if getattr(args, name) is not None}
        if args.optimize:
            if given:
                parser.error("--optimize chooses the parameters; drop " + ", ".join(f"--{n}" for n in sorted(given)))
        else:
            allowed = set().union(*(FAMILY_FLAGS[f] for f in families))
            if given - allowed:
                parser.error("flags not used by any listed family: " + ", ".join(f"--{n}" for n in sorted(given - allowed)))
            for fam in families:
                missing = FAMILY_FLAGS[fam] - given - {"phis"}
                if missing:
                    parser.error(f"family {fam} requires " + ", ".join(f"--{n}" for n in sorted(missing)))
        cmd.families = families
        cmd.params = {name: math.radians(getattr(args, name)) for name in given}
        cmd.region = _parse_annulus(parser, args.annulus)
        cmd.optimize = args.optimize
        cmd.grid_step = _positive_deg(parser, "--grid-step", args.grid_step)
        cmd.coarse_step = _positive_deg(parser, "--coarse-step", args.coarse_step)
        cmd.out = args.out
        return cmd

    if args.family is None:
        parser.error("--family is required")
    cmd.family = args.family
    if args.command == "optimize":
        given = [name for name in PARAM_FLAGS if getattr(args, name) is not None]
        if given:
            parser.error("optimize chooses the parameters; drop " + ", ".join(f"--{n}" for n in given))
    else:
        cmd.params = _check_family_flags(parser, args, args.family)

    if args.command in ("project", "invert", "tissot"):
        cmd.input, cmd.out = args.input, args.out
    elif args.command == "analyze":
        cmd.region = _parse_annulus(parser, args.annulus)
        cmd.grid_step = _positive_deg(parser, "--grid-step", args.grid_step)
        cmd.dump_profile = args.dump_profile
    elif args.command == "optimize":
        cmd.region = _parse_annulus(parser, args.annulus)
        cmd.coarse_step = _positive_deg(parser, "--coarse-step", args.coarse_step)
        cmd.trace = args.trace
    elif args.command == "render":
        tissot_deg = args.tissot if args.tissot is not None else 30.0
        try:
            cmd.render_config = render.RenderConfig(
                graticule_deg=args.graticule,
                tissot_deg=tissot_deg,
                tissot_scale=args.tissot_scale,
                lat_min_deg=args.lat_min,
                lat_max_deg=args.lat_max,
            )
        except ValueError as exc:
            parser.error(str(exc))
        cmd.params["tissot"] = args.tissot is not None
        cmd.map, cmd.out = args.map, args.out
    return cmd


def _positive_deg(parser, flag: str, value: float) -> float:
    if not value > 0:
        parser.error(f"{flag} must be positive")
    return math.radians(value)


def build_spec(family: str, params: dict):
    if family == "conic1":
        return build_conic_one_parallel(params["phi0"])
    if family == "conic2":
        return build_conic_two_parallels(params["phi1"], params["phi2"])
    if family == "azimuthal":
        return build_azimuthal()
    return build_cylindrical(params.get("phis", 0.0))


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _key_values(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def _run_project(cmd: CommandSpec) -> str:
    spec = build_spec(cmd.family, cmd.params)
    lines = ["x,y"]
    for lineno, p in io.iter_points(cmd.input):
        try:
            q = forward(spec, p)
        except ValueError as exc:
            raise io.InputError(str(exc), lineno) from None
        lines.append(f"{io.fmt(q.x, 15)},{io.fmt(q.y, 15)}")
    return "\n".join(lines) + "\n"


def _run_invert(cmd: CommandSpec) -> str:
    spec = build_spec(cmd.family, cmd.params)
    lines = [",".join(io.POINT_HEADER)]
    for lineno, (x, y) in io.iter_xy(cmd.input):
        try:
            p = inverse(spec, PlanePoint(x, y))
        except ValueError as exc:
            raise io.InputError(str(exc), lineno) from None
        lines.append(f"{io.fmt(p.lon_deg, 15)},{io.fmt(p.lat_deg, 15)}")
    return "\n".join(lines) + "\n"


def _run_tissot(cmd: CommandSpec) -> str:
    spec = build_spec(cmd.family, cmd.params)
    lines = ["lon_deg,lat_deg,x,y,semi_major,semi_minor,orientation_deg"]
    for lineno, p in io.iter_points(cmd.input):
        try:
            e = tissot(spec, p)
        except ValueError as exc:
            raise io.InputError(str(exc), lineno) from None
        values = (p.lon_deg, p.lat_deg, e.center.x, e.center.y, e.semi_major, e.semi_minor,
                  math.degrees(e.orientation))
        lines.append(",".join(io.fmt(v) for v in values))
    return "\n".join(lines) + "\n"


def _run_analyze(cmd: CommandSpec) -> tuple[str, dict]:
    spec = build_spec(cmd.family, cmd.params)
    report = analyze_annulus(spec, cmd.region, cmd.grid_step)
    text = _key_values(
        [
            ("projection", spec.label()),
            ("L", io.fmt(report.L)),
            ("ell", io.fmt(report.ell)),
            ("v", io.fmt(report.v)),
            ("K_max", io.fmt(report.K_max)),
            ("witness_L_lat_deg", io.fmt(report.witness_L.lat_deg)),
            ("witness_ell_lat_deg", io.fmt(report.witness_ell.lat_deg)),
            ("grid_step_deg", io.fmt(math.degrees(cmd.grid_step))),
            ("samples", report.grid["samples"]),
        ]
    )
    files = {}
    if cmd.dump_profile:
        phis = np.union1d(latitude_grid(cmd.region, cmd.grid_step), candidate_latitudes(spec, cmd.region))
        k, s, K = sigma_profile(spec, phis)
        rows = ["phi_deg,k,sigma,K"]
        rows += [",".join(io.fmt(v) for v in (math.degrees(p), a, b, c)) for p, a, b, c in zip(phis, k, s, K)]
        files[cmd.dump_profile] = "\n".join(rows) + "\n"
    return text, files


def _run_optimize(cmd: CommandSpec) -> tuple[str, dict]:
    result = OPTIMIZERS[cmd.family](cmd.region, cmd.coarse_step, trace=cmd.trace is not None)
    params = ",".join(io.fmt(math.degrees(p)) for p in result.parameters)
    text = _key_values(
        [
            ("family", cmd.family),
            ("projection", result.best_spec.label()),
            ("parameters_deg", params),
            ("v_star", io.fmt(result.v_star)),
            ("certificate", io.fmt(result.certificate)),
            ("evaluations", result.evaluations),
        ]
    )
    files = {}
    if cmd.trace:
        rows = ["p1_deg,p2_deg,v"]
        for ps, v in result.search_trace:
            p1 = io.fmt(math.degrees(ps[0]))
            p2 = io.fmt(math.degrees(ps[1])) if len(ps) > 1 else ""
            rows.append(f"{p1},{p2},{io.fmt(v)}")
        files[cmd.trace] = "\n".join(rows) + "\n"
    return text, files


def _run_compare(cmd: CommandSpec) -> str:
    specs = []
    for fam in cmd.families:
        if cmd.optimize and fam in OPTIMIZERS:
            specs.append(OPTIMIZERS[fam](cmd.region, cmd.coarse_step).best_spec)
        else:
            specs.append(build_spec(fam, cmd.params))
    rows = compare_specs(specs, cmd.region, cmd.grid_step)
    text = io.format_report_csv(rows)
    for row in rows:
        if row.error:
            text += f"# {row.label}: {row.error}\n"
    return text


def _run_render(cmd: CommandSpec) -> str:
    spec = build_spec(cmd.family, cmd.params)
    lines = []
    if cmd.map:
        path = io.sample_coastline_path() if cmd.map == "sample" else cmd.map
        lines = io.read_polylines(path)
    points = render.tissot_grid(cmd.render_config) if cmd.params.get("tissot") else None
    return render.render_svg(spec, lines, cmd.render_config, points)


def _run_triangle(cmd: CommandSpec) -> str:
    sides = solve_sides_from_angles(TriangleAngles(*cmd.angles))
    return _key_values((name, io.fmt(math.degrees(s))) for name, s in zip(("a_deg", "b_deg", "c_deg"), sides))


def run(cmd: CommandSpec) -> int:
    """Execute a parsed command; 0 on success, 1 on a domain or I/O error."""
    try:
        files = {}
        if cmd.command == "project":
            text = _run_project(cmd)
        elif cmd.command == "invert":
            text = _run_invert(cmd)
        elif cmd.command == "tissot":
            text = _run_tissot(cmd)
        elif cmd.command == "analyze":
            text, files = _run_analyze(cmd)
        elif cmd.command == "optimize":
            text, files = _run_optimize(cmd)
        elif cmd.command == "compare":
            text = _run_compare(cmd)
        elif cmd.command == "render":
            files = {cmd.out: _run_render(cmd)}
            text = ""
        else:
            text = _run_triangle(cmd)
        out_path = cmd.out if cmd.command in ("project", "invert", "tissot", "compare") else None
        for path, content in files.items():
            _emit(content, path)
        _emit(text, out_path)
    except (ValueError, OSError) as exc:
        print(f"equiconic {cmd.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
