"""Choice of standard parallels minimising the metrical distortion on a band.

Every search is a coarse exhaustive grid over the admissible parameters
followed by golden-section refinement around the grid incumbent.  The
objective is a maximum of smooth pieces, so at the two-parallel optimum it
has a kink along a curve that is not aligned with either coordinate axis.
Plain coordinate passes can stall on such a kink; the two-parameter search
therefore refines the profile ``phi1 -> min over phi2``, with an inner
golden-section search for each outer evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .distortion import (
    SphericalAnnulus,
    candidate_latitudes,
    metrical_distortion,
)
from .projection import (
    COINCIDENT_GAP,
    ConicSpec,
    apex_colatitude,
    build_conic_one_parallel,
    build_conic_two_parallels,
    build_cylindrical,
    critical_latitude,
    parallel_scale,
)

INV_PHI = (math.sqrt(5) - 1) / 2
DEFAULT_COARSE_STEP = math.radians(0.25)
REFINE_TOL = 1e-12
CERTIFICATE_TOL = 1e-8


@dataclass
class OptimizationResult:
    best_spec: ConicSpec
    v_star: float
    certificate: float
    evaluations: int
    parameters: tuple[float, ...]
    search_trace: list[tuple[tuple[float, ...], float]] | None = field(default=None, repr=False)


def golden_section(f, a: float, b: float, tol: float = REFINE_TOL) -> tuple[float, float]:
    """Minimise a unimodal f on [a, b]; returns (x, f(x)) with x a visited point."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = min((fc, c), (fd, d))
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            cand = (fc, c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            cand = (fd, d)
        if cand < best:
            best = cand
    return best[1], best[0]


class _Counter:
    """Objective wrapper counting calls and optionally recording them."""

    def __init__(self, fn, trace: bool):
        self.fn = fn
        self.calls = 0
        self.trace = [] if trace else None

    def __call__(self, *params):
        self.calls += 1
        try:
            value = self.fn(*params)
        except ValueError:
            value = math.inf
        if self.trace is not None:
            self.trace.append((params, value))
        return value


def _grid_nodes(lo: float, hi: float, step: float) -> list[float]:
    count = max(1, round((hi - lo) / step))
    if lo + count * step > hi + 1e-12:
        count -= 1
    nodes = [lo + i * step for i in range(count + 1)]
    if hi - nodes[-1] > 1e-12:
        nodes.append(hi)
    return nodes


def _check_region(region: SphericalAnnulus, step: float) -> None:
    if not (-math.pi / 2 < region.phi_south and region.phi_north < math.pi / 2):
        raise ValueError("annulus must lie strictly between the poles")
    if region.width < 2 * step:
        raise ValueError(
            f"annulus width {math.degrees(region.width):.6f} deg is narrower than two grid steps"
        )


def _k_at(spec: ConicSpec, phi: float) -> float:
    return float(parallel_scale(spec, phi))


def equioscillation_residual(spec: ConicSpec, region: SphericalAnnulus) -> float:
    """Max pairwise mismatch of k(south), k(north) and 1/k_min."""
    k_s = _k_at(spec, region.phi_south)
    k_n = _k_at(spec, region.phi_north)
    crit = min(max(critical_latitude(spec), region.phi_south), region.phi_north)
    inv_min = 1.0 / _k_at(spec, crit)
    return max(abs(k_s - k_n), abs(k_s - inv_min), abs(k_n - inv_min))


def balance_residual(spec: ConicSpec, region: SphericalAnnulus) -> float:
    """Gap between the two largest sigma values among the extremal candidates."""
    sig = sorted(
        (max(k, 1 / k) for k in (_k_at(spec, p) for p in candidate_latitudes(spec, region))),
        reverse=True,
    )
    return abs(sig[0] - sig[1]) if len(sig) > 1 else 0.0


def optimize_two_parallels(
    region: SphericalAnnulus, coarse_step: float = DEFAULT_COARSE_STEP, trace: bool = False
) -> OptimizationResult:
    _check_region(region, coarse_step)
    obj = _Counter(lambda a, b: metrical_distortion(build_conic_two_parallels(a, b), region), trace)

    nodes = _grid_nodes(region.phi_south, region.phi_north, coarse_step)
    best = (math.inf, 0.0, 0.0)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            v = obj(a, b)
            # strict comparison keeps the smallest (phi1, phi2) on ties
            if v < best[0]:
                best = (v, a, b)
    if not math.isfinite(best[0]):
        raise ValueError("no admissible pair of standard parallels in this annulus")
    v_grid, g1, g2 = best
    width = 2 * coarse_step
    hi_limit = region.phi_north

    def inner(a: float) -> tuple[float, float]:
        lo = max(a + 2 * COINCIDENT_GAP, g2 - width)
        hi = min(hi_limit, g2 + width)
        if lo >= hi:
            return hi, math.inf
        return golden_section(lambda b: obj(a, b), lo, hi)

    def profile(a: float) -> float:
        return inner(a)[1]

    a_star, v_star = golden_section(profile, max(region.phi_south, g1 - width), min(hi_limit, g1 + width))
    b_star, v_star = inner(a_star)
    if not v_star <= v_grid:
        a_star, b_star, v_star = g1, g2, v_grid

    spec = build_conic_two_parallels(a_star, b_star)
    return OptimizationResult(
        best_spec=spec,
        v_star=metrical_distortion(spec, region),
        certificate=equioscillation_residual(spec, region),
        evaluations=obj.calls,
        parameters=(a_star, b_star),
        search_trace=obj.trace,
    )


def _optimize_one(region, build, lo, hi, coarse_step, trace) -> OptimizationResult:
    obj = _Counter(lambda p: metrical_distortion(build(p), region), trace)
    nodes = _grid_nodes(lo, hi, coarse_step)
    best = (math.inf, 0.0)
    for p in nodes:
        v = obj(p)
        if v < best[0]:
            best = (v, p)
    if not math.isfinite(best[0]):
        raise ValueError("no admissible standard parallel in this annulus")
    v_grid, g = best
    p_star, v_star = golden_section(obj, max(lo, g - 2 * coarse_step), min(hi, g + 2 * coarse_step))
    if not v_star <= v_grid:
        p_star, v_star = g, v_grid
    spec = build(p_star)
    return OptimizationResult(
        best_spec=spec,
        v_star=metrical_distortion(spec, region),
        certificate=balance_residual(spec, region),
        evaluations=obj.calls,
        parameters=(p_star,),
        search_trace=obj.trace,
    )


def optimize_one_parallel(
    region: SphericalAnnulus, coarse_step: float = DEFAULT_COARSE_STEP, trace: bool = False
) -> OptimizationResult:
    """Best tangent cone whose tangent parallel lies in the band."""
    _check_region(region, coarse_step)
    lo = max(region.phi_south, 2 * COINCIDENT_GAP)
    if lo >= region.phi_north:
        raise ValueError("tangent cones need a northern tangent parallel inside the annulus")
    return _optimize_one(region, build_conic_one_parallel, lo, region.phi_north, coarse_step, trace)


def optimize_cylindrical(
    region: SphericalAnnulus, coarse_step: float = DEFAULT_COARSE_STEP, trace: bool = False
) -> OptimizationResult:
    _check_region(region, coarse_step)
    return _optimize_one(
        region, build_cylindrical, region.phi_south, region.phi_north, coarse_step, trace
    )


def solve_apex_offset(
    target_apex_colat: float, region: SphericalAnnulus, samples: int = 256
) -> ConicSpec:
    """Conic with parallels placed symmetrically about the band centre whose
    apex lies target_apex_colat beyond the pole.

    The half-spacing of the parallels is scanned from 0 (tangent cone at the
    centre) to half the band width, and the first bracketed crossing is
    bisected.
    """
    if not 0 <= target_apex_colat < math.pi / 4:
        raise ValueError("target apex colatitude must lie in [0, 45) deg")
    mid = 0.5 * (region.phi_south + region.phi_north)
    half = 0.5 * region.width
    if mid <= 0:
        raise ValueError("apex search needs a band centred in the northern hemisphere")

    def build(s: float) -> ConicSpec:
        if s == 0:
            return build_conic_one_parallel(mid)
        return build_conic_two_parallels(mid - s, mid + s)

    def residual(s: float) -> float:
        return apex_colatitude(build(s)) - target_apex_colat

    spacings = [half * i / samples for i in range(samples + 1)]
    values = []
    for s in spacings:
        try:
            values.append(residual(s))
        except ValueError:
            values.append(math.nan)
    for (s0, r0), (s1, r1) in zip(zip(spacings, values), zip(spacings[1:], values[1:])):
        if math.isnan(r0) or math.isnan(r1):
            continue
        if r0 == 0:
            return build(s0)
        if r0 * r1 < 0:
            lo, hi = s0, s1
            while hi - lo > 1e-14:
                m = 0.5 * (lo + hi)
                if (residual(m) < 0) == (r0 < 0):
                    lo = m
                else:
                    hi = m
            return build(0.5 * (lo + hi))
    if values[-1] == 0:
        return build(spacings[-1])
    finite = [v + target_apex_colat for v in values if not math.isnan(v)]
    attained = (
        f"[{math.degrees(min(finite)):.6f}, {math.degrees(max(finite)):.6f}] deg"
        if finite
        else "nothing"
    )
    raise ValueError(
        f"apex colatitude {math.degrees(target_apex_colat):.6f} deg unreachable in this band; "
        f"attained range {attained}"
    )
