"""Regenerate the bundled coarse coastline fixture.

Source: Natural Earth 1:110m admin-0 countries (public domain), as shipped in
the ``naturalearth_lowres`` dataset of geopandas <= 0.14.  Countries are
unioned into land masses, the exterior rings are simplified, and only rings
that keep at least MIN_POINTS vertices are written.

    pip download geopandas==0.14.4 --no-deps -d /tmp/gpd
    # extract geopandas/datasets/naturalearth_lowres/ from the wheel, then
    python scripts/make_coastline_fixture.py /tmp/gpd/.../naturalearth_lowres.shp

Needs pyshp and shapely; neither is a runtime dependency of the package.
"""

import sys
from pathlib import Path

import shapefile
from shapely.geometry import shape
from shapely.ops import unary_union

TOLERANCE_DEG = 1.2
MIN_POINTS = 6
OUT = Path(__file__).resolve().parents[1] / "src" / "equiconic" / "data" / "coastline.csv"


def main(shp_path):
    reader = shapefile.Reader(shp_path)
    land = unary_union([shape(s.__geo_interface__).buffer(0) for s in reader.shapes()])
    rings = []
    for poly in sorted(land.geoms, key=lambda g: -g.area):
        ring = poly.exterior.simplify(TOLERANCE_DEG, preserve_topology=False)
        # -180 and 180 are the same meridian once longitudes are normalised
        coords = [(180.0 if round(x, 3) == -180 else round(x, 3), round(y, 3)) for x, y in ring.coords]
        dedup = [c for i, c in enumerate(coords) if i == 0 or c != coords[i - 1]]
        if len(dedup) >= MIN_POINTS:
            rings.append(dedup)
    total = sum(len(r) for r in rings)
    with open(OUT, "w") as fh:
        fh.write("# Coarse world coastline, simplified from Natural Earth 1:110m (public domain).\n")
        fh.write(f"# polylines: {len(rings)}, points: {total}\n")
        fh.write("id,lon_deg,lat_deg\n")
        for i, ring in enumerate(rings):
            for x, y in ring:
                fh.write(f"land{i:03d},{x:g},{y:g}\n")
    print(len(rings), total)


if __name__ == "__main__":
    main(sys.argv[1])
