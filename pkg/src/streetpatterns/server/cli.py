"""Command-line entry points.

    streetpatterns synth        generate a synthetic region with planted clusters
    streetpatterns ingest       build the sampling lattice from a roads file
    streetpatterns extract-plan write the street-view image fetch plan
    streetpatterns cluster      fit patterns and write catalog + assignments
    streetpatterns analyze      annotate candidate routes, print distributions
    streetpatterns serve        run the HTTP API
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .. import jsonio, routeviz
from ..cluster import (
    ClusteringConfig,
    Method,
    Strategy,
    agglomerative,
    kmeans,
    meanshift,
    select_k,
)
from ..datastore import RegionDataset, RegionManifest, SampleRecord, load_dataset, save_dataset
from ..features import FeatureKind
from ..geo import GeoPoint, Polyline, SamplePoint, chunk_polyline, sample_points
from ..providers import build_fetch_plan, fetch_plan_to_dict
from ..synthetic import SynthSpec, generate_synthetic_region
from ..vapattern import build_patterns
from .service import AnalysisError, RegionService, RouteQuery

_METHODS = {
    "kmeans": Method.KMEANS,
    "agglo": Method.AGGLOMERATIVE,
    "meanshift": Method.MEANSHIFT,
}
_STRATEGIES = {"predrop": Strategy.PRE_DROP, "maxscore": Strategy.MAX_SCORE}
_FEATURES = {"latent": FeatureKind.LATENT, "cat6": FeatureKind.CATEGORY6}


def _parse_point(text: str) -> GeoPoint:
    try:
        lat, lon = (float(x) for x in text.split(","))
        return GeoPoint(lat, lon)
    except ValueError as exc:
        raise click.BadParameter(f"expected lat,lon - {exc}") from exc


@click.group()
def main():
    """Street-view appearance patterns along driving routes."""


@main.command()
@click.option("--clusters", type=int, default=4, show_default=True)
@click.option("--per", type=int, default=500, show_default=True, help="samples per cluster")
@click.option("--dims", type=int, default=16, show_default=True)
@click.option("--sep", type=float, default=10.0, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def synth(clusters, per, dims, sep, seed, out):
    """Generate a synthetic region dataset with planted clusters."""
    spec = SynthSpec(
        n_clusters=clusters, samples_per_cluster=per, dims=dims, separation=sep, seed=seed
    )
    ds = generate_synthetic_region(spec)
    save_dataset(ds, out)
    click.echo(f"wrote {ds.manifest.sample_count} samples to {out}")


@main.command()
@click.option("--region", "region_dir", type=click.Path(), required=True)
@click.option("--roads", type=click.Path(exists=True), required=True,
              help="GeoJSON FeatureCollection of LineString street segments")
@click.option("--provider", type=click.Choice(["fixture", "live"]), default="fixture",
              show_default=True)
@click.option("--name", default=None, help="region id (defaults to the directory name)")
def ingest(region_dir, roads, provider, name):
    """Chunk streets into the 20 m lattice and write the region skeleton."""
    doc = jsonio.read_json(roads)
    samples = []
    for i, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry", {})
        if geom.get("type") != "LineString":
            continue
        points = [GeoPoint(lat, lon) for lon, lat in geom.get("coordinates", [])]
        if len(points) < 2:
            continue
        seg_ref = str(feature.get("properties", {}).get("id", f"seg-{i}"))
        for sp in sample_points(chunk_polyline(Polyline(points))):
            samples.append(
                SampleRecord(
                    id=len(samples),
                    location=sp.location,
                    side=sp.side,
                    view_angle_deg=sp.view_angle_deg,
                    segment_ref=seg_ref,
                )
            )
    if not samples:
        raise click.ClickException("roads file produced no sample points")

    lats = [s.location.lat for s in samples]
    lons = [s.location.lon for s in samples]
    pad = 0.002
    provider_cfg = (
        {"type": "fixture", "routes_file": "routes_fixture.json"}
        if provider == "fixture"
        else {"type": "live"}
    )
    manifest = RegionManifest(
        region=name or Path(region_dir).name,
        sample_count=len(samples),
        bbox=(min(lats) - pad, min(lons) - pad, max(lats) + pad, max(lons) + pad),
        provider=provider_cfg,
    )
    save_dataset(RegionDataset(manifest=manifest, samples=samples), region_dir)
    click.echo(f"ingested {len(samples)} sample points into {region_dir}")


@main.command("extract-plan")
@click.option("--region", "region_dir", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
def extract_plan(region_dir, out):
    """Write the ordered street-view image fetch plan for a region."""
    ds = load_dataset(region_dir)
    points = [
        SamplePoint(
            chunk_index=s.id // 2,
            location=s.location,
            side=s.side,
            view_angle_deg=s.view_angle_deg,
        )
        for s in ds.samples
    ]
    plan = build_fetch_plan(points, image_size=ds.manifest.image_size)
    jsonio.write_json(out, fetch_plan_to_dict(plan))
    click.echo(f"planned {len(plan.requests)} image requests -> {out}")


@main.command()
@click.option("--region", "region_dir", type=click.Path(exists=True), required=True)
@click.option("--features", "features_key", type=click.Choice(sorted(_FEATURES)),
              default="latent", show_default=True)
@click.option("--method", type=click.Choice(sorted(_METHODS)), default="kmeans",
              show_default=True)
@click.option("--k-min", type=int, default=2, show_default=True)
@click.option("--k-max", type=int, default=8, show_default=True)
@click.option("--strategy", type=click.Choice(sorted(_STRATEGIES)), default="predrop",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bandwidth", type=float, default=None, help="mean-shift bandwidth (auto if omitted)")
def cluster(region_dir, features_key, method, k_min, k_max, strategy, seed, bandwidth):
    """Discover appearance patterns and write catalog + assignments."""
    ds = load_dataset(region_dir)
    kind = _FEATURES[features_key]
    if kind not in ds.matrices:
        raise click.ClickException(f"region has no {features_key} feature matrix")
    matrix = ds.matrices[kind]
    method_enum = _METHODS[method]

    if method_enum == Method.MEANSHIFT:
        model = meanshift(matrix, bandwidth=bandwidth)
        click.echo(f"mean-shift discovered k={model.k_effective} modes")
    else:
        report = select_k(
            matrix,
            method=method_enum,
            k_range=(k_min, k_max),
            strategy=_STRATEGIES[strategy],
            seed=seed,
        )
        for k in sorted(report.per_k):
            marker = " <- chosen" if k == report.chosen_k else ""
            click.echo(f"k={k}  silhouette={report.per_k[k]:.4f}{marker}")
        cfg = ClusteringConfig(method=method_enum, k=report.chosen_k, seed=seed)
        fit = kmeans if method_enum == Method.KMEANS else agglomerative
        model = fit(matrix, cfg)

    if FeatureKind.CATEGORY6 not in ds.matrices:
        raise click.ClickException("region has no cat6 matrix; cannot build pattern vectors")
    catalog = build_patterns(model, ds.matrices[FeatureKind.CATEGORY6], region=ds.manifest.region)
    ds.catalog = catalog
    ds.assignments = model.assignments
    save_dataset(ds, region_dir)
    click.echo(f"built {len(catalog.patterns)} patterns in {region_dir}")


@main.command()
@click.option("--region", "region_dir", type=click.Path(exists=True), required=True)
@click.option("--origin", required=True, help="lat,lon")
@click.option("--dest", required=True, help="lat,lon")
@click.option("--seg-len", type=float, default=routeviz.DEFAULT_SEGMENT_LEN_M, show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="GeoJSON output path (default: <region>/analysis.geojson)")
def analyze(region_dir, origin, dest, seg_len, out):
    """Annotate candidate routes with patterns; print distributions, write GeoJSON."""
    ds = load_dataset(region_dir)
    service = RegionService(ds, region_dir=region_dir)
    query = RouteQuery(
        origin=_parse_point(origin),
        destination=_parse_point(dest),
        region=ds.manifest.region,
        seg_len_m=seg_len,
    )
    try:
        payload = service.query_routes(query)
    except AnalysisError as exc:
        raise click.ClickException(str(exc)) from exc

    names = {str(p.id): p.name for p in ds.catalog.patterns}
    features = []
    for route in payload["routes"]:
        click.echo(f"route {route['index']} ({route['length_m']:.0f} m)")
        for side in ("L", "R"):
            traj = route["trajectories"][side]
            shares = ", ".join(
                f"{names.get(pid, pid)}: {frac:.1%}"
                for pid, frac in sorted(traj["distribution"]["fractions"].items())
            )
            click.echo(f"  {side}: {shares or 'no matched samples'}")
            for seg in traj["segments"]:
                features.append(
                    {
                        "type": "Feature",
                        "geometry": {
                            "type": "LineString",
                            "coordinates": [[lon, lat] for lat, lon in seg["geometry"]],
                        },
                        "properties": {
                            "route": route["id"],
                            "index": route["index"],
                            "side": side,
                            "start_m": seg["start_m"],
                            "end_m": seg["end_m"],
                            "dominant_pattern": seg["dominant"],
                            "color": seg["color"],
                            "counts": seg["counts"],
                        },
                    }
                )
    geojson = {"type": "FeatureCollection", "features": features}
    out_path = Path(out) if out else Path(region_dir) / "analysis.geojson"
    jsonio.write_json(out_path, geojson)
    click.echo(f"wrote {len(features)} segment features -> {out_path}")


@main.command()
@click.option("--region", "region_dir", type=click.Path(exists=True), required=True)
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", type=click.Path(exists=True), default=None,
              help="serve a built frontend from this directory")
def serve(region_dir, port, host, ui_dir):
    """Run the HTTP API for one region."""
    import uvicorn

    from .api import create_app

    ds = load_dataset(region_dir)
    app = create_app(RegionService(ds, region_dir=region_dir), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
