import math

import numpy as np
import pytest

from equiconic.distortion import (
    SphericalAnnulus,
    analytic_jacobian,
    analyze_annulus,
    candidate_latitudes,
    compare_specs,
    latitude_grid,
    scale_point,
    tissot,
)
from equiconic.projection import (
    DomainError,
    build_azimuthal,
    build_conic_one_parallel,
    build_conic_two_parallels,
    build_cylindrical,
    critical_latitude,
    forward_xy,
    parallel_scale,
)
from equiconic.sphere import GeoPoint

from conftest import deg, random_domain_points

r = math.radians
FD_STEP = 1e-6

BRANCHES = {
    "conic2": build_conic_two_parallels(r(40), r(70)),
    "conic1": build_conic_one_parallel(r(50)),
    "azimuthal": build_azimuthal(),
    "cylindrical": build_cylindrical(r(30)),
}


def fd_jacobian(spec, p, step=FD_STEP, scale=1.0, rotate=0.0):
    """Central differences of the (optionally similarity-transformed) forward map
    along unit north and east tangent vectors."""
    c, s = math.cos(rotate), math.sin(rotate)

    def f(lat, lon):
        x, y = forward_xy(spec, lat, lon)
        return scale * np.array([c * x - s * y, s * x + c * y]) + 3.0

    north = (f(p.lat + step, p.lon) - f(p.lat - step, p.lon)) / (2 * step)
    east = (f(p.lat, p.lon + step / math.cos(p.lat)) - f(p.lat, p.lon - step / math.cos(p.lat))) / (2 * step)
    return np.column_stack([north, east])


def test_jacobian_at_standard_parallel_is_isometric():
    spec = build_conic_two_parallels(r(30), r(60))
    for lat in (30, 60):
        sv = analytic_jacobian(spec, deg(lat, 25)).singular_values()
        assert sv == pytest.approx((1.0, 1.0), abs=1e-14)


def test_plate_carree_jacobian_at_60():
    jac = analytic_jacobian(build_cylindrical(0.0), deg(60, 10))
    assert jac.singular_values() == pytest.approx((2.0, 1.0), abs=1e-12)
    assert np.linalg.svd(fd_jacobian(build_cylindrical(0.0), deg(60, 10)), compute_uv=False) == pytest.approx(
        (2.0, 1.0), abs=1e-8
    )


@pytest.mark.parametrize("name", BRANCHES)
def test_jacobian_matches_finite_differences(name, rng):
    spec = BRANCHES[name]
    worst = 0.0
    for p in random_domain_points(rng, 1000, -85, 85):
        analytic = analytic_jacobian(spec, p).matrix()
        numeric = fd_jacobian(spec, p)
        worst = max(worst, np.abs(analytic - numeric).max() / np.abs(analytic).max())
    assert worst < 1e-6


@pytest.mark.parametrize("name", BRANCHES)
def test_jacobian_columns_orthogonal(name, rng):
    spec = BRANCHES[name]
    for p in random_domain_points(rng, 200, -85, 85):
        jac = analytic_jacobian(spec, p)
        assert jac.dx_north * jac.dx_east + jac.dy_north * jac.dy_east == pytest.approx(0, abs=1e-14)
        assert math.hypot(jac.dx_north, jac.dy_north) == pytest.approx(1.0, abs=1e-14)
        assert jac.det != 0


def test_jacobian_rejects_poles():
    with pytest.raises(DomainError):
        analytic_jacobian(build_azimuthal(), deg(90, 0))
    with pytest.raises(DomainError):
        analytic_jacobian(build_cylindrical(0.0), deg(-90, 0))


def test_tissot_examples():
    spec = build_conic_two_parallels(r(30), r(60))
    e = tissot(spec, deg(30, 40))
    assert (e.semi_major, e.semi_minor, e.orientation) == pytest.approx((1, 1, 0), abs=1e-12)

    azi = build_azimuthal()
    p = deg(60, 30)
    e = tissot(azi, p)
    assert (e.semi_major, e.semi_minor) == pytest.approx((1.0471975511965976, 1.0), abs=1e-12)
    # major axis tangent to the parallel circle: perpendicular to the radius vector
    radial = math.atan2(e.center.y, e.center.x)
    assert math.cos(e.orientation - radial) == pytest.approx(0, abs=1e-12)


def test_tissot_orientation_follows_the_meridian_when_k_below_one():
    spec = build_conic_two_parallels(r(30), r(60))
    e = tissot(spec, deg(45, 0))
    assert e.semi_major == 1.0 and e.semi_minor < 1
    # central meridian image is the y-axis
    assert abs(e.orientation) == pytest.approx(math.pi / 2, abs=1e-12)


@pytest.mark.parametrize("name", BRANCHES)
def test_tissot_axes_equal_finite_difference_singular_values(name, rng):
    spec = BRANCHES[name]
    for p in random_domain_points(rng, 300, -80, 80):
        e = tissot(spec, p)
        sv = np.linalg.svd(fd_jacobian(spec, p), compute_uv=False)
        assert (e.semi_major, e.semi_minor) == pytest.approx(tuple(sv), abs=1e-9)
        k = float(parallel_scale(spec, p.lat))
        assert (e.semi_major, e.semi_minor) == pytest.approx((max(1, k), min(1, k)), abs=1e-12)


def test_scale_point_examples():
    s = scale_point(build_conic_two_parallels(r(30), r(60)), deg(60, 0))
    assert (s.M, s.m, s.sigma, s.K) == pytest.approx((1, 1, 1, 1), abs=1e-12)

    s = scale_point(build_cylindrical(0.0), deg(60, 0))
    assert (s.M, s.m, s.sigma, s.K) == pytest.approx((2, 1, 2, 2), abs=1e-12)

    s = scale_point(build_conic_two_parallels(r(0), r(63)), deg(36, 0))
    # mpmath: k = 0.8504080582525844, sigma = 1/k
    assert s.M == 1.0
    assert s.m == pytest.approx(0.850408058252584386, abs=1e-12)
    assert s.sigma == pytest.approx(1.17590607273265569923, abs=1e-12)
    assert s.K == pytest.approx(s.sigma, abs=1e-15)


@pytest.mark.parametrize("name", BRANCHES)
def test_sigma_at_least_one(name, rng):
    spec = BRANCHES[name]
    for p in random_domain_points(rng, 500, -85, 85):
        s = scale_point(spec, p)
        assert s.M >= s.m > 0
        assert s.sigma >= 1 and s.K >= 1
        if s.sigma == pytest.approx(1, abs=1e-12):
            assert parallel_scale(spec, p.lat) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("scale", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("name", BRANCHES)
def test_dilatation_invariant_under_similarity(name, scale, rng):
    spec = BRANCHES[name]
    for p in random_domain_points(rng, 50, -80, 80):
        sv = np.linalg.svd(fd_jacobian(spec, p, scale=scale, rotate=0.7), compute_uv=False)
        assert sv[0] / sv[1] == pytest.approx(scale_point(spec, p).K, rel=1e-6)


def brute_force_sigma_extremes(spec, south, north, step_deg=0.01):
    """sigma straight from k = cos-based formulas on a uniform grid, no candidates."""
    phis = np.radians(np.arange(south, north + step_deg / 2, step_deg))
    k = parallel_scale(spec, phis)
    sigma = np.maximum(k, 1 / k)
    return sigma.max(), sigma.min()


def test_plate_carree_band():
    spec = build_cylindrical(0.0)
    rep = analyze_annulus(spec, SphericalAnnulus.from_degrees(0, 60))
    assert (rep.L, rep.ell, rep.v) == pytest.approx((2, 1, math.log(2)), abs=1e-12)
    L, ell = brute_force_sigma_extremes(spec, 0, 60)
    assert math.log(L / ell) == pytest.approx(0.69314718055994530942, abs=1e-9)
    assert rep.witness_L.lat_deg == pytest.approx(60)
    assert rep.witness_ell.lat_deg == pytest.approx(0)


def test_azimuthal_cap():
    rep = analyze_annulus(build_azimuthal(), SphericalAnnulus.from_degrees(60, 90))
    assert rep.ell == 1.0
    assert rep.L == pytest.approx((math.pi / 6) / 0.5, abs=1e-12)
    assert rep.v == pytest.approx(0.04611759718129048275, abs=1e-12)
    assert rep.witness_ell.lat == math.pi / 2


def test_both_standard_parallels_inside():
    spec = build_conic_two_parallels(r(45), r(65))
    rep = analyze_annulus(spec, SphericalAnnulus.from_degrees(40, 70))
    assert rep.ell == pytest.approx(1.0, abs=1e-15)
    assert rep.K_max == rep.L


def test_region_validation():
    with pytest.raises(ValueError):
        SphericalAnnulus.from_degrees(50, 50)
    with pytest.raises(DomainError):
        analyze_annulus(build_cylindrical(0.0), SphericalAnnulus.from_degrees(60, 90))
    with pytest.raises(ValueError):
        analyze_annulus(build_cylindrical(0.0), SphericalAnnulus.from_degrees(0, 60), grid_step=0)


def test_critical_latitude_is_the_minimum_of_k():
    for spec in (build_conic_two_parallels(r(40), r(70)), build_conic_two_parallels(r(-10), r(30))):
        phis = np.linspace(-1.5, 1.5, 300_001)
        k = parallel_scale(spec, phis)
        assert critical_latitude(spec) == pytest.approx(phis[np.argmin(k)], abs=2e-5)


SPECS_AND_REGIONS = [
    (build_conic_two_parallels(r(45), r(65)), (40, 70)),
    (build_conic_two_parallels(r(45), r(65)), (50, 60)),
    (build_conic_two_parallels(r(10), r(20)), (30, 60)),
    (build_conic_one_parallel(r(55)), (-20, 80)),
    (build_azimuthal(), (-30, 90)),
    (build_cylindrical(r(20)), (-40, 35)),
]


@pytest.mark.parametrize("spec, band", SPECS_AND_REGIONS)
def test_fast_path_equals_two_dimensional_brute_force(spec, band):
    region = SphericalAnnulus.from_degrees(*band)
    rep = analyze_annulus(spec, region)
    phis = np.union1d(latitude_grid(region, r(0.01)), candidate_latitudes(spec, region))
    phis = phis[np.abs(phis) < math.pi / 2 - 1e-9]
    lons = np.radians(np.arange(-179.5, 180, 15.0))
    mats = np.array([analytic_jacobian(spec, GeoPoint(lat, lon)).matrix() for lat in phis for lon in lons])
    sv = np.linalg.svd(mats, compute_uv=False)
    sigmas = np.maximum(sv[:, 0], 1 / sv[:, 1])
    if band[1] == 90:  # pole: sigma = 1 by continuity, outside the singular frame
        sigmas = np.append(sigmas, 1.0)
    assert math.log(sigmas.max() / sigmas.min()) == pytest.approx(rep.v, abs=1e-9)


@pytest.mark.parametrize("spec, band", SPECS_AND_REGIONS)
def test_candidates_capture_extremes(spec, band):
    """A 4x finer uniform grid never beats the candidate-augmented extremes."""
    region = SphericalAnnulus.from_degrees(*band)
    rep = analyze_annulus(spec, region)
    lo, hi = band
    hi = min(hi, 90 - 1e-7)
    L, ell = brute_force_sigma_extremes(spec, lo, hi, 0.0025)
    assert L <= rep.L + 1e-12
    assert ell >= rep.ell - 1e-12


def test_nested_regions_are_monotone():
    spec = build_conic_two_parallels(r(45), r(65))
    reports = [analyze_annulus(spec, SphericalAnnulus.from_degrees(c - w, c + w))
               for c, w in [(55, 5), (55, 10), (55, 20)]]
    for inner, outer in zip(reports, reports[1:]):
        assert outer.L >= inner.L
        assert outer.ell <= inner.ell
    reports = [analyze_annulus(spec, SphericalAnnulus.from_degrees(70 - w, 70)) for w in (2, 8, 30)]
    for inner, outer in zip(reports, reports[1:]):
        assert outer.L >= inner.L
        assert outer.ell <= inner.ell


def test_compare_specs_orders_by_v():
    region = SphericalAnnulus.from_degrees(40, 70)
    specs = [
        build_cylindrical(r(55)),
        build_azimuthal(),
        build_conic_one_parallel(r(55)),
        build_conic_two_parallels(r(45), r(66)),
    ]
    rows = compare_specs(specs, region)
    assert [row.spec for row in rows] == [specs[3], specs[2], specs[1], specs[0]]
    vs = [row.report.v for row in rows]
    assert vs == sorted(vs)
    assert len(compare_specs(specs[:1], region)) == 1


def test_compare_specs_ties_keep_construction_order():
    region = SphericalAnnulus.from_degrees(-30, 30)
    a, b = build_cylindrical(r(10)), build_cylindrical(r(-10))
    rows = compare_specs([a, b], region, labels=["first", "second"])
    assert [row.label for row in rows] == ["first", "second"]


def test_compare_specs_annotates_failures():
    region = SphericalAnnulus.from_degrees(60, 90)
    rows = compare_specs([build_cylindrical(0.0), build_azimuthal()], region)
    assert rows[0].label == "azimuthal" and rows[0].error is None
    assert rows[1].report is None and "pole" in rows[1].error
