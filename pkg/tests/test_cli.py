import json

import jsonschema
import numpy as np
import pytest
from click.testing import CliRunner

from streetpatterns import jsonio
from streetpatterns.datastore import load_dataset
from streetpatterns.server.cli import main
from streetpatterns.server.schemas import GEOJSON_SCHEMA


@pytest.fixture()
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


def synth_args(out, clusters=3, per=40, dims=8, sep=9.0, seed=11):
    return [
        "synth", "--clusters", str(clusters), "--per", str(per), "--dims", str(dims),
        "--sep", str(sep), "--seed", str(seed), "--out", str(out),
    ]


def test_synth_creates_region(runner, tmp_path):
    out = tmp_path / "region"
    result = run_ok(runner, synth_args(out))
    assert "120 samples" in result.output
    ds = load_dataset(out)
    assert ds.manifest.sample_count == 120


def test_cluster_writes_catalog(runner, tmp_path):
    out = tmp_path / "region"
    run_ok(runner, synth_args(out))
    result = run_ok(
        runner,
        ["cluster", "--region", str(out), "--features", "latent", "--method", "kmeans",
         "--k-min", "2", "--k-max", "6", "--strategy", "predrop", "--seed", "11"],
    )
    assert "<- chosen" in result.output
    ds = load_dataset(out)
    assert ds.catalog is not None
    assert len(ds.catalog.patterns) == 3
    assert ds.assignments is not None
    assert (out / "catalog.json").exists()
    assert (out / "assignments.u32").exists()


def test_cluster_meanshift(runner, tmp_path):
    out = tmp_path / "region"
    run_ok(runner, synth_args(out, clusters=2, per=30, sep=12.0))
    result = run_ok(
        runner,
        ["cluster", "--region", str(out), "--features", "latent", "--method", "meanshift"],
    )
    assert "discovered" in result.output
    assert load_dataset(out).catalog is not None


def test_extract_plan(runner, tmp_path):
    out = tmp_path / "region"
    run_ok(runner, synth_args(out, clusters=2, per=20))
    plan_path = tmp_path / "plan.json"
    run_ok(runner, ["extract-plan", "--region", str(out), "--out", str(plan_path)])
    doc = json.loads(plan_path.read_text())
    assert len(doc["requests"]) == 40
    assert doc["image_size"] == [300, 300]
    assert [r["sample_id"] for r in doc["requests"]] == list(range(40))


def test_ingest_roads(runner, tmp_path):
    roads = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    # GeoJSON order: [lon, lat]; a ~222 m eastward street
                    "coordinates": [[-82.0, 41.0], [-81.99736, 41.0]],
                },
                "properties": {"id": "main-street"},
            }
        ],
    }
    roads_path = tmp_path / "roads.geojson"
    roads_path.write_text(json.dumps(roads))
    region = tmp_path / "region"
    result = run_ok(
        runner,
        ["ingest", "--region", str(region), "--roads", str(roads_path), "--provider", "fixture"],
    )
    assert "ingested" in result.output
    ds = load_dataset(region)
    # ~222 m -> 12 chunks -> 24 side samples
    assert ds.manifest.sample_count == 24
    assert ds.samples[0].segment_ref == "main-street"
    assert ds.manifest.provider == {"type": "fixture", "routes_file": "routes_fixture.json"}


def analyze_args(region):
    fixture = jsonio.read_json(region / "routes_fixture.json")
    o, d = fixture["origin"], fixture["destination"]
    return [
        "analyze", "--region", str(region),
        "--origin", f"{o[0]},{o[1]}", "--dest", f"{d[0]},{d[1]}",
    ]


def test_analyze_prints_and_exports(runner, tmp_path):
    region = tmp_path / "region"
    run_ok(runner, synth_args(region))
    run_ok(runner, ["cluster", "--region", str(region), "--k-max", "5", "--seed", "11"])
    result = run_ok(runner, analyze_args(region))
    assert "route 1" in result.output and "route 3" in result.output
    assert "VaPattern" in result.output
    geojson = json.loads((region / "analysis.geojson").read_text())
    jsonschema.validate(geojson, GEOJSON_SCHEMA)
    sides = {f["properties"]["side"] for f in geojson["features"]}
    assert sides == {"L", "R"}


def test_analyze_repeated_runs_byte_identical(runner, tmp_path):
    region = tmp_path / "region"
    run_ok(runner, synth_args(region, clusters=2, per=30, sep=12.0))
    run_ok(runner, ["cluster", "--region", str(region), "--k-max", "4", "--seed", "11"])
    out_a = tmp_path / "a.geojson"
    out_b = tmp_path / "b.geojson"
    first = run_ok(runner, analyze_args(region) + ["--out", str(out_a)])
    second = run_ok(runner, analyze_args(region) + ["--out", str(out_b)])
    assert first.output.replace(str(out_a), "") == second.output.replace(str(out_b), "")
    assert out_a.read_bytes() == out_b.read_bytes()


def test_analyze_rejects_degenerate_query(runner, tmp_path):
    region = tmp_path / "region"
    run_ok(runner, synth_args(region, clusters=2, per=30))
    run_ok(runner, ["cluster", "--region", str(region), "--k-max", "4", "--seed", "11"])
    fixture = jsonio.read_json(region / "routes_fixture.json")
    o = fixture["origin"]
    result = runner.invoke(
        main,
        ["analyze", "--region", str(region), "--origin", f"{o[0]},{o[1]}", "--dest", f"{o[0]},{o[1]}"],
    )
    assert result.exit_code != 0
    assert "coincide" in result.output
