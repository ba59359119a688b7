"""Region dataset persistence.

A region lives in one directory: a manifest, one JSON-lines record per
sampled street-view location, binary feature matrices, and (once built)
the pattern catalog and cluster assignments. Saves are canonical, so
save -> load -> save is byte-identical; loads validate row counts, dense
ids, and file references before anything downstream touches the data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import jsonio, vivf
from .features import CLASS_NAMES, FeatureKind, FeatureMatrix
from .geo import GeoPoint, Side
from .vapattern import PatternCatalog, catalog_from_dict, catalog_to_dict

MANIFEST_FILE = "manifest.json"
SAMPLES_FILE = "samples.jsonl"
CATALOG_FILE = "catalog.json"
ASSIGNMENTS_FILE = "assignments.u32"
PLANTED_FILE = "planted.u32"
ROUTES_FIXTURE_FILE = "routes_fixture.json"

FEATURE_FILES = {
    FeatureKind.CATEGORY19: "cat19.vivf",
    FeatureKind.CATEGORY6: "cat6.vivf",
    FeatureKind.LATENT: "latent.vivf",
}
_FEATURE_KEYS = {
    FeatureKind.CATEGORY19: "cat19",
    FeatureKind.CATEGORY6: "cat6",
    FeatureKind.LATENT: "latent",
}

DEFAULT_IMAGE_SIZE = (300, 300)


class DatasetError(ValueError):
    """A region directory is inconsistent with its manifest."""


@dataclass(frozen=True)
class SampleRecord:
    id: int
    location: GeoPoint
    side: Side
    view_angle_deg: float
    segment_ref: str
    image_path: str | None = None
    captured: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.view_angle_deg < 360.0:
            raise ValueError(f"view angle {self.view_angle_deg} outside [0, 360)")


@dataclass
class RegionManifest:
    region: str
    sample_count: int
    class_order: tuple[str, ...] = CLASS_NAMES
    bbox: tuple[float, float, float, float] | None = None
    image_size: tuple[int, int] = DEFAULT_IMAGE_SIZE
    catalog: str | None = None
    assignments: str | None = None
    planted_k: int | None = None
    provider: dict | None = None
    feature_files: dict[str, str] = field(default_factory=dict)


@dataclass
class RegionDataset:
    manifest: RegionManifest
    samples: list[SampleRecord]
    matrices: dict[FeatureKind, FeatureMatrix] = field(default_factory=dict)
    catalog: PatternCatalog | None = None
    assignments: np.ndarray | None = None
    planted: np.ndarray | None = None
    routes_fixture: dict | None = None

    def validate(self) -> None:
        n = len(self.samples)
        if self.manifest.sample_count != n:
            raise DatasetError(
                f"manifest says {self.manifest.sample_count} samples, found {n}"
            )
        ids = [s.id for s in self.samples]
        if ids != list(range(n)):
            raise DatasetError("sample ids must be dense 0..n-1 in order")
        for kind, matrix in self.matrices.items():
            if matrix.rows != n:
                raise DatasetError(
                    f"{_FEATURE_KEYS[kind]} matrix has {matrix.rows} rows for {n} samples"
                )
        for arr, name in ((self.assignments, "assignments"), (self.planted, "planted")):
            if arr is not None and arr.shape[0] != n:
                raise DatasetError(f"{name} length {arr.shape[0]} does not match {n} samples")


def _sample_to_dict(s: SampleRecord) -> dict:
    return {
        "id": s.id,
        "lat": s.location.lat,
        "lon": s.location.lon,
        "side": s.side.value,
        "view_angle_deg": s.view_angle_deg,
        "segment_ref": s.segment_ref,
        "image_path": s.image_path,
        "captured": s.captured,
    }


def _sample_from_dict(doc: dict) -> SampleRecord:
    return SampleRecord(
        id=int(doc["id"]),
        location=GeoPoint(doc["lat"], doc["lon"]),
        side=Side(doc["side"]),
        view_angle_deg=float(doc["view_angle_deg"]),
        segment_ref=doc["segment_ref"],
        image_path=doc.get("image_path"),
        captured=doc.get("captured"),
    )


def _manifest_to_dict(m: RegionManifest) -> dict:
    return {
        "region": m.region,
        "sample_count": m.sample_count,
        "class_order": list(m.class_order),
        "bbox": list(m.bbox) if m.bbox is not None else None,
        "image_size": list(m.image_size),
        "catalog": m.catalog,
        "assignments": m.assignments,
        "planted_k": m.planted_k,
        "provider": m.provider,
        "features": dict(sorted(m.feature_files.items())),
    }


def _manifest_from_dict(doc: dict) -> RegionManifest:
    return RegionManifest(
        region=doc["region"],
        sample_count=int(doc["sample_count"]),
        class_order=tuple(doc["class_order"]),
        bbox=tuple(doc["bbox"]) if doc.get("bbox") is not None else None,
        image_size=tuple(doc.get("image_size", DEFAULT_IMAGE_SIZE)),
        catalog=doc.get("catalog"),
        assignments=doc.get("assignments"),
        planted_k=doc.get("planted_k"),
        provider=doc.get("provider"),
        feature_files=dict(doc.get("features", {})),
    )


def save_dataset(ds: RegionDataset, path: str | Path) -> None:
    ds.validate()
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    feature_files = {}
    for kind, matrix in sorted(ds.matrices.items()):
        name = FEATURE_FILES[kind]
        vivf.write_matrix(root / name, matrix)
        feature_files[_FEATURE_KEYS[kind]] = name
    ds.manifest.feature_files = feature_files

    with open(root / SAMPLES_FILE, "w", encoding="utf-8") as fh:
        for s in ds.samples:
            fh.write(jsonio.canonical_dumps(_sample_to_dict(s)) + "\n")

    if ds.catalog is not None:
        jsonio.write_json(root / CATALOG_FILE, catalog_to_dict(ds.catalog))
        ds.manifest.catalog = CATALOG_FILE
    if ds.assignments is not None:
        vivf.write_labels(root / ASSIGNMENTS_FILE, ds.assignments)
        ds.manifest.assignments = ASSIGNMENTS_FILE
    if ds.planted is not None:
        vivf.write_labels(root / PLANTED_FILE, ds.planted)
    if ds.routes_fixture is not None:
        jsonio.write_json(root / ROUTES_FIXTURE_FILE, ds.routes_fixture)

    jsonio.write_json(root / MANIFEST_FILE, _manifest_to_dict(ds.manifest))


def load_dataset(path: str | Path) -> RegionDataset:
    root = Path(path)
    manifest_path = root / MANIFEST_FILE
    if not manifest_path.exists():
        raise DatasetError(f"{manifest_path}: no manifest found")
    try:
        manifest = _manifest_from_dict(jsonio.read_json(manifest_path))
    except (json.JSONDecodeError, KeyError) as exc:
        raise DatasetError(f"{manifest_path}: unparseable manifest ({exc})") from exc

    samples_path = root / SAMPLES_FILE
    if not samples_path.exists():
        raise DatasetError(f"{samples_path}: missing samples file")
    samples = []
    with open(samples_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                samples.append(_sample_from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise DatasetError(f"{samples_path}:{line_no}: bad record ({exc})") from exc

    matrices = {}
    for key, name in manifest.feature_files.items():
        kind = {v: k for k, v in _FEATURE_KEYS.items()}.get(key)
        if kind is None:
            raise DatasetError(f"{manifest_path}: unknown feature key {key!r}")
        file_path = root / name
        if not file_path.exists():
            raise DatasetError(f"{file_path}: referenced by manifest but missing")
        matrix = vivf.read_matrix(file_path)
        if matrix.kind != kind:
            raise DatasetError(f"{file_path}: header kind {matrix.kind.name} != manifest {key}")
        matrices[kind] = matrix

    catalog = None
    if manifest.catalog is not None:
        catalog_path = root / manifest.catalog
        if not catalog_path.exists():
            raise DatasetError(f"{catalog_path}: referenced by manifest but missing")
        catalog = catalog_from_dict(jsonio.read_json(catalog_path))

    assignments = None
    if manifest.assignments is not None:
        assign_path = root / manifest.assignments
        if not assign_path.exists():
            raise DatasetError(f"{assign_path}: referenced by manifest but missing")
        assignments = vivf.read_labels(assign_path)

    planted = None
    if manifest.planted_k is not None:
        planted_path = root / PLANTED_FILE
        if not planted_path.exists():
            raise DatasetError(f"{planted_path}: planted_k set but file missing")
        planted = vivf.read_labels(planted_path)

    routes_fixture = None
    fixture_path = root / ROUTES_FIXTURE_FILE
    if fixture_path.exists():
        routes_fixture = jsonio.read_json(fixture_path)

    ds = RegionDataset(
        manifest=manifest,
        samples=samples,
        matrices=matrices,
        catalog=catalog,
        assignments=assignments,
        planted=planted,
        routes_fixture=routes_fixture,
    )
    ds.validate()
    return ds
