"""Deterministic synthetic regions with planted cluster structure.

The generator lays out a square grid of streets, chunks them into the
20 m sampling lattice, and plants n_clusters appearance clusters:
Gaussian blobs in latent space separated by a configurable distance, and
per-cluster category prototypes on the 19-class simplex. Planted labels
are stored as ground truth, which makes the dataset a desk-scale oracle
for the clustering and pipeline tests. Everything is a pure function of
the spec, including its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datastore import RegionDataset, RegionManifest, SampleRecord
from .features import FeatureKind, FeatureMatrix, MAJOR_INDICES, NUM_CLASSES, reduce_to_major
from .geo import GeoPoint, Polyline, chunk_polyline, sample_points

GRID_ORIGIN = GeoPoint(41.0, -82.0)
BLOCK_LEN_M = 200.0
_METERS_PER_DEG_LAT = 111_194.92664455873  # R * pi / 180


@dataclass(frozen=True)
class SynthSpec:
    n_clusters: int
    samples_per_cluster: int
    dims: int
    separation: float
    seed: int

    def __post_init__(self):
        if self.n_clusters < 2:
            raise ValueError("need at least 2 clusters")
        if self.samples_per_cluster < 1:
            raise ValueError("need at least 1 sample per cluster")
        if self.dims < self.n_clusters:
            raise ValueError("latent dims must be >= n_clusters for equidistant centers")
        if self.separation <= 0:
            raise ValueError("separation must be positive")

    @property
    def n_samples(self) -> int:
        return self.n_clusters * self.samples_per_cluster


def _grid_corner(row: int, col: int) -> GeoPoint:
    dlat = BLOCK_LEN_M / _METERS_PER_DEG_LAT
    dlon = BLOCK_LEN_M / (_METERS_PER_DEG_LAT * math.cos(math.radians(GRID_ORIGIN.lat)))
    return GeoPoint(GRID_ORIGIN.lat + row * dlat, GRID_ORIGIN.lon + col * dlon)


def grid_streets(size: int) -> list[tuple[str, Polyline]]:
    """Horizontal then vertical streets of a size x size corner grid."""
    streets = []
    for r in range(size):
        streets.append((f"street-h-{r}", Polyline([_grid_corner(r, c) for c in range(size)])))
    for c in range(size):
        streets.append((f"street-v-{c}", Polyline([_grid_corner(r, c) for r in range(size)])))
    return streets


def _grid_size_for(n_samples: int) -> int:
    size = 2
    while _lattice_capacity(size) < n_samples:
        size += 1
    return size


def _lattice_capacity(size: int) -> int:
    chunks_per_block = math.ceil(BLOCK_LEN_M / 20.0)
    blocks = 2 * size * (size - 1)
    return blocks * chunks_per_block * 2


def generate_synthetic_region(spec: SynthSpec, region: str | None = None) -> RegionDataset:
    """Build a full region dataset with planted labels and a 3-route fixture."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_samples
    size = _grid_size_for(n)
    streets = grid_streets(size)

    samples: list[SampleRecord] = []
    for street_id, line in streets:
        for sp in sample_points(chunk_polyline(line)):
            if len(samples) >= n:
                break
            samples.append(
                SampleRecord(
                    id=len(samples),
                    location=sp.location,
                    side=sp.side,
                    view_angle_deg=sp.view_angle_deg,
                    segment_ref=street_id,
                )
            )
        if len(samples) >= n:
            break

    planted = np.arange(n) // spec.samples_per_cluster

    # latent blobs: orthogonal centers at pairwise distance `separation`,
    # unit-variance noise
    centers = np.zeros((spec.n_clusters, spec.dims))
    for c in range(spec.n_clusters):
        centers[c, c] = spec.separation / math.sqrt(2.0)
    latent = centers[planted] + rng.normal(0.0, 1.0, size=(n, spec.dims))

    # per-cluster category prototypes concentrated on the six major classes
    alpha = np.full(NUM_CLASSES, 0.05)
    alpha[list(MAJOR_INDICES)] = 2.0
    prototypes = rng.dirichlet(alpha, size=spec.n_clusters)
    cat19 = prototypes[planted] + rng.normal(0.0, 0.02, size=(n, NUM_CLASSES))
    cat19 = np.clip(cat19, 0.0, None)
    cat19 /= cat19.sum(axis=1, keepdims=True)
    cat6 = reduce_to_major(cat19)

    lats = [s.location.lat for s in samples]
    lons = [s.location.lon for s in samples]
    pad = 0.002
    bbox = (min(lats) - pad, min(lons) - pad, max(lats) + pad, max(lons) + pad)

    manifest = RegionManifest(
        region=region or f"synth-{spec.n_clusters}x{spec.samples_per_cluster}-s{spec.seed}",
        sample_count=n,
        bbox=bbox,
        planted_k=spec.n_clusters,
        provider={"type": "fixture", "routes_file": "routes_fixture.json"},
    )
    return RegionDataset(
        manifest=manifest,
        samples=samples,
        matrices={
            FeatureKind.CATEGORY19: FeatureMatrix(FeatureKind.CATEGORY19, cat19),
            FeatureKind.CATEGORY6: FeatureMatrix(FeatureKind.CATEGORY6, cat6),
            FeatureKind.LATENT: FeatureMatrix(FeatureKind.LATENT, latent),
        },
        planted=planted,
        routes_fixture=synthetic_routes_fixture(spec),
    )


def synthetic_routes_fixture(spec: SynthSpec) -> dict:
    """Three corner-to-corner candidate routes over the same street grid.

    Route legs coincide with grid-street legs, so re-chunking a route
    reproduces the dataset's sample locations exactly.
    """
    size = _grid_size_for(spec.n_samples)
    last = size - 1
    origin = _grid_corner(0, 0)
    destination = _grid_corner(last, last)

    east_then_north = [_grid_corner(0, c) for c in range(size)]
    east_then_north += [_grid_corner(r, last) for r in range(1, size)]

    north_then_east = [_grid_corner(r, 0) for r in range(size)]
    north_then_east += [_grid_corner(last, c) for c in range(1, size)]

    staircase = [_grid_corner(0, 0)]
    r = c = 0
    while r < last or c < last:
        if c < last:
            c += 1
            staircase.append(_grid_corner(r, c))
        if r < last:
            r += 1
            staircase.append(_grid_corner(r, c))

    def route_doc(points: list[GeoPoint], summary: str) -> dict:
        return {
            "geometry": {"type": "coordinates", "value": [[p.lat, p.lon] for p in points]},
            "legs": [{"summary": summary, "distance_m": Polyline(points).length_m()}],
        }

    return {
        "origin": [origin.lat, origin.lon],
        "destination": [destination.lat, destination.lon],
        "routes": [
            route_doc(east_then_north, "east then north"),
            route_doc(north_then_east, "north then east"),
            route_doc(staircase, "staircase"),
        ],
    }
