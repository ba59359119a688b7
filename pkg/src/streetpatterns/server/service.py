"""Route-query pipeline behind the HTTP API and the analyze command.

A query runs provider routes through chunking, matches every chunk-side
sample point to the nearest ingested sample within 15 m (preferring the
closest view angle, so routes driven opposite to the ingest direction
still hit the correct roadside), and produces per-side trajectories,
dominant-pattern segments, and distributions. Results are deterministic
for a fixed dataset, and identical queries yield byte-identical payloads;
a small memo cache keyed by the derived route ids also serves the
marker-drag image lookups.
"""

from __future__ import annotations

import hashlib
import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .. import jsonio, routeviz
from ..datastore import CATALOG_FILE, RegionDataset
from ..geo import GeoPoint, Polyline, Side, chunk_polyline, haversine_distance
from ..providers import (
    FixtureRouteProvider,
    LiveRouteProvider,
    ProviderError,
    RouteProvider,
)
from ..vapattern import catalog_to_dict, recolor_pattern, rename_pattern

MATCH_RADIUS_M = 15.0
MAX_ROUTES = 3
QUERY_CACHE_SIZE = 16
_METERS_PER_DEG = 111_194.92664455873


class AnalysisError(Exception):
    """Base class for query-pipeline failures."""


class QueryError(AnalysisError):
    """The query itself is invalid (400-class)."""


class ProviderUnavailable(AnalysisError):
    """The route provider failed (502-class)."""


@dataclass(frozen=True)
class RouteQuery:
    origin: GeoPoint
    destination: GeoPoint
    region: str
    seg_len_m: float = routeviz.DEFAULT_SEGMENT_LEN_M


class RegionService:
    """One loaded region: dataset, catalog, provider, and query memoization."""

    def __init__(
        self,
        dataset: RegionDataset,
        region_dir: str | Path | None = None,
        provider: RouteProvider | None = None,
    ):
        self.dataset = dataset
        self.region_dir = Path(region_dir) if region_dir is not None else None
        self.provider = provider if provider is not None else self._provider_from_manifest()
        self._catalog_lock = threading.Lock()
        self._cache_lock = threading.Lock()
        self._payloads: OrderedDict[str, dict] = OrderedDict()
        self._trajectories: dict[str, dict[str, routeviz.RouteTrajectory]] = {}
        self._build_sample_index()

    # -- setup ---------------------------------------------------------------

    def _provider_from_manifest(self) -> RouteProvider | None:
        cfg = self.dataset.manifest.provider
        if cfg is None:
            return None
        if cfg.get("type") == "fixture":
            if self.dataset.routes_fixture is not None:
                return FixtureRouteProvider(self.dataset.routes_fixture)
            if self.region_dir is not None:
                return FixtureRouteProvider(self.region_dir / cfg["routes_file"])
            return None
        if cfg.get("type") == "live":
            return LiveRouteProvider()
        return None

    def _build_sample_index(self) -> None:
        samples = self.dataset.samples
        if not samples:
            self._tree = None
            return
        lats = np.array([s.location.lat for s in samples])
        lons = np.array([s.location.lon for s in samples])
        self._lat0 = float(lats.mean())
        self._lon0 = float(lons.mean())
        self._coslat = math.cos(math.radians(self._lat0))
        xy = np.column_stack(
            [
                (lons - self._lon0) * _METERS_PER_DEG * self._coslat,
                (lats - self._lat0) * _METERS_PER_DEG,
            ]
        )
        self._tree = cKDTree(xy)
        self._angles = np.array([s.view_angle_deg for s in samples])

    def _to_xy(self, p: GeoPoint) -> tuple[float, float]:
        return (
            (p.lon - self._lon0) * _METERS_PER_DEG * self._coslat,
            (p.lat - self._lat0) * _METERS_PER_DEG,
        )

    # -- query pipeline --------------------------------------------------------

    def _match_sample(self, location: GeoPoint, view_angle_deg: float) -> int | None:
        """Nearest ingested sample within 15 m, preferring the closest view angle."""
        if self._tree is None:
            return None
        hits = self._tree.query_ball_point(self._to_xy(location), r=MATCH_RADIUS_M)
        if not hits:
            return None
        hits = sorted(hits)
        diffs = np.abs(self._angles[hits] - view_angle_deg) % 360.0
        diffs = np.minimum(diffs, 360.0 - diffs)
        return hits[int(np.argmin(diffs))]

    def _require_catalog(self):
        if self.dataset.catalog is None or self.dataset.assignments is None:
            raise QueryError("region has no pattern catalog yet; run clustering first")

    def _validate_query(self, query: RouteQuery) -> None:
        if query.region != self.dataset.manifest.region:
            raise KeyError(query.region)
        if haversine_distance(query.origin, query.destination) < 1.0:
            raise QueryError("origin and destination coincide")
        if query.seg_len_m < routeviz.MIN_SEGMENT_LEN_M:
            raise QueryError(f"segment length must be >= {routeviz.MIN_SEGMENT_LEN_M} m")
        bbox = self.dataset.manifest.bbox
        if bbox is not None:
            for name, p in (("origin", query.origin), ("destination", query.destination)):
                if not (bbox[0] <= p.lat <= bbox[2] and bbox[1] <= p.lon <= bbox[3]):
                    raise QueryError(f"{name} lies outside the region bounding box")

    def _query_key(self, query: RouteQuery) -> str:
        return jsonio.canonical_dumps(
            {
                "region": query.region,
                "origin": [query.origin.lat, query.origin.lon],
                "destination": [query.destination.lat, query.destination.lon],
                "seg_len_m": query.seg_len_m,
            }
        )

    def query_routes(self, query: RouteQuery) -> dict:
        """Annotated route set for a query; memoized on the query itself."""
        self._require_catalog()
        self._validate_query(query)
        key = self._query_key(query)
        with self._cache_lock:
            if key in self._payloads:
                self._payloads.move_to_end(key)
                return self._payloads[key]

        try:
            response = self.provider.get_routes(query.origin, query.destination)
        except ProviderError as exc:
            raise ProviderUnavailable(str(exc)) from exc
        except AttributeError:
            raise ProviderUnavailable("no route provider configured") from None

        labels = self.dataset.assignments
        colors = {p.id: p.color for p in self.dataset.catalog.patterns}
        payload_routes = []
        trajectories = {}
        for index, route in enumerate(response.routes[:MAX_ROUTES], start=1):
            rid = f"r{index}-" + hashlib.sha1((key + str(index)).encode()).hexdigest()[:8]
            per_side = {}
            traj_pair = {}
            for side in (Side.LEFT, Side.RIGHT):
                traj = self._build_trajectory(rid, side, route.geometry, labels)
                traj_pair[side.value] = traj
                per_side[side.value] = self._trajectory_payload(traj, query.seg_len_m, colors)
            trajectories[rid] = traj_pair
            payload_routes.append(
                {
                    "id": rid,
                    "index": index,
                    "length_m": route.geometry.length_m(),
                    "geometry": [[p.lat, p.lon] for p in route.geometry.points],
                    "legs": [dict(leg) for leg in route.legs],
                    "trajectories": per_side,
                }
            )

        payload = {
            "query": {
                "region": query.region,
                "origin": {"lat": query.origin.lat, "lon": query.origin.lon},
                "destination": {"lat": query.destination.lat, "lon": query.destination.lon},
                "seg_len_m": query.seg_len_m,
            },
            "routes": payload_routes,
        }
        with self._cache_lock:
            self._payloads[key] = payload
            self._trajectories.update(trajectories)
            while len(self._payloads) > QUERY_CACHE_SIZE:
                _, stale = self._payloads.popitem(last=False)
                for route in stale["routes"]:
                    self._trajectories.pop(route["id"], None)
        return payload

    def _build_trajectory(
        self, rid: str, side: Side, line: Polyline, labels: np.ndarray
    ) -> routeviz.RouteTrajectory:
        chunks = chunk_polyline(line)
        sample_ids, distances, patterns = [], [], []
        walked = 0.0
        for chunk in chunks:
            mid_m = walked + chunk.length_m / 2.0
            walked += chunk.length_m
            angle = (chunk.heading_deg + (-90.0 if side == Side.LEFT else 90.0)) % 360.0
            match = self._match_sample(chunk.mid, angle)
            if match is None:
                continue
            sample_ids.append(match)
            distances.append(mid_m)
            patterns.append(int(labels[match]))
        return routeviz.RouteTrajectory(
            route_id=rid,
            side=side,
            geometry=line,
            sample_ids=np.array(sample_ids, dtype=np.int64),
            distances_m=np.array(distances),
            patterns=np.array(patterns, dtype=np.int64),
            catalog=self.dataset.manifest.region,
        )

    def _trajectory_payload(
        self, traj: routeviz.RouteTrajectory, seg_len_m: float, colors: dict[int, str]
    ) -> dict:
        if traj.sample_count == 0:
            return {
                "sample_count": 0,
                "segments": [],
                "distribution": {
                    "fractions": {},
                    "length_m": traj.length_m,
                    "sample_count": 0,
                },
            }
        segments = routeviz.segment_route(traj, seg_len_m)
        dist = routeviz.distribution(traj)
        return {
            "sample_count": traj.sample_count,
            "segments": [
                {
                    "start_m": seg.start_m,
                    "end_m": seg.end_m,
                    "dominant": seg.dominant_pattern,
                    "color": (
                        colors.get(seg.dominant_pattern, "#BBBBBB")
                        if seg.dominant_pattern is not None
                        else "#BBBBBB"
                    ),
                    "counts": {str(k): v for k, v in sorted(seg.counts.items())},
                    "geometry": [[p.lat, p.lon] for p in seg.geometry.points],
                }
                for seg in segments
            ],
            "distribution": {
                "fractions": {str(k): v for k, v in sorted(dist.fractions.items())},
                "length_m": dist.length_m,
                "sample_count": dist.sample_count,
            },
        }

    # -- drill-down images -----------------------------------------------------

    def route_images(self, route_id: str, side: str, at_m: float, window: int) -> dict:
        if window < 1:
            raise QueryError("window must be >= 1")
        with self._cache_lock:
            pair = self._trajectories.get(route_id)
        if pair is None:
            raise KeyError(route_id)
        if side not in pair:
            raise KeyError(side)
        traj = pair[side]
        at = min(max(at_m, 0.0), traj.length_m)
        ids = routeviz.images_near(traj, at, window)
        by_id = {int(s): i for i, s in enumerate(traj.sample_ids)}
        samples = []
        for sid in ids:
            record = self.dataset.samples[sid]
            pos = by_id[sid]
            samples.append(
                {
                    "id": sid,
                    "lat": record.location.lat,
                    "lon": record.location.lon,
                    "view_angle_deg": record.view_angle_deg,
                    "distance_m": float(traj.distances_m[pos]),
                    "pattern": int(traj.patterns[pos]),
                    "image": record.image_path,
                }
            )
        return {
            "route": route_id,
            "side": side,
            "at_m": at,
            "window": window,
            "samples": samples,
        }

    # -- pattern catalog ---------------------------------------------------------

    def patterns_payload(self) -> dict:
        self._require_catalog()
        return catalog_to_dict(self.dataset.catalog)

    def update_pattern(self, pattern_id: int, name: str | None, color: str | None) -> dict:
        """Rename/recolor atomically and persist the catalog to the region dir."""
        self._require_catalog()
        with self._catalog_lock:
            catalog = self.dataset.catalog
            if name is not None:
                catalog = rename_pattern(catalog, pattern_id, name)
            if color is not None:
                catalog = recolor_pattern(catalog, pattern_id, color)
            if self.region_dir is not None:
                tmp = self.region_dir / (CATALOG_FILE + ".tmp")
                jsonio.write_json(tmp, catalog_to_dict(catalog))
                tmp.replace(self.region_dir / CATALOG_FILE)
            self.dataset.catalog = catalog
            # annotated payloads embed catalog colors; drop them so the next
            # query reflects the update
            with self._cache_lock:
                self._payloads.clear()
                self._trajectories.clear()
        doc = catalog_to_dict(catalog)
        return next(p for p in doc["patterns"] if p["id"] == pattern_id)

    def region_descriptor(self) -> dict:
        m = self.dataset.manifest
        return {
            "id": m.region,
            "sample_count": m.sample_count,
            "bbox": list(m.bbox) if m.bbox is not None else None,
            "patterns": len(self.dataset.catalog.patterns) if self.dataset.catalog else 0,
        }
