"""End to end: candidate routes annotated with patterns, compared side by side.

Builds a synthetic region, clusters it, then runs the same pipeline the
HTTP API uses: provider routes -> 20 m chunks -> nearest-sample labels ->
dominant-pattern segments and per-trajectory distributions. Finishes with
a left/right comparison and a GeoJSON export.
"""

import tempfile
from pathlib import Path

from streetpatterns.cluster import ClusteringConfig, Method, kmeans
from streetpatterns.datastore import save_dataset
from streetpatterns.features import FeatureKind
from streetpatterns.geo import GeoPoint
from streetpatterns.jsonio import canonical_dumps
from streetpatterns.server.service import RegionService, RouteQuery
from streetpatterns.synthetic import SynthSpec, generate_synthetic_region
from streetpatterns.vapattern import build_patterns

ds = generate_synthetic_region(SynthSpec(4, 150, 8, 10.0, 5))
model = kmeans(
    ds.matrices[FeatureKind.LATENT], ClusteringConfig(method=Method.KMEANS, k=4, seed=5)
)
ds.catalog = build_patterns(model, ds.matrices[FeatureKind.CATEGORY6], region=ds.manifest.region)
ds.assignments = model.assignments

workdir = Path(tempfile.mkdtemp(prefix="route-annotation-"))
region_dir = workdir / "region"
save_dataset(ds, region_dir)

service = RegionService(ds, region_dir=region_dir)
origin = GeoPoint(*ds.routes_fixture["origin"])
destination = GeoPoint(*ds.routes_fixture["destination"])
payload = service.query_routes(
    RouteQuery(origin=origin, destination=destination, region=ds.manifest.region)
)

names = {str(p.id): p.name for p in ds.catalog.patterns}
print(f"{len(payload['routes'])} candidate routes from provider fixture\n")
for route in payload["routes"]:
    print(f"route {route['index']}  ({route['length_m']:.0f} m)")
    for side in ("L", "R"):
        traj = route["trajectories"][side]
        shares = "  ".join(
            f"{names[pid]}={frac:.0%}"
            for pid, frac in sorted(traj["distribution"]["fractions"].items())
        )
        print(f"  {side}: {len(traj['segments'])} segments  {shares}")

# drill down: samples around the 300 m marker of route 1, left side
rid = payload["routes"][0]["id"]
strip = service.route_images(rid, "L", at_m=300.0, window=4)
print(f"\nimages near 300 m on route 1 L: {[s['id'] for s in strip['samples']]}")

geojson_path = workdir / "segments.geojson"
features = []
for route in payload["routes"]:
    for side in ("L", "R"):
        for seg in route["trajectories"][side]["segments"]:
            features.append(
                {
                    "type": "Feature",
                    "geometry": {
                        "type": "LineString",
                        "coordinates": [[lon, lat] for lat, lon in seg["geometry"]],
                    },
                    "properties": {"route": route["index"], "side": side, "color": seg["color"]},
                }
            )
geojson_path.write_text(canonical_dumps({"type": "FeatureCollection", "features": features}))
print(f"wrote {len(features)} colored segment features -> {geojson_path}")
