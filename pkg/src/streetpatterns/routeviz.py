"""Route trajectories, dominant-pattern segments, and distributions.

A route has two trajectories (left and right side), each an ordered run of
labeled samples with along-route distances. Segmentation tiles a
trajectory into user-length pieces and colors each by its majority
pattern; distributions summarize a whole trajectory for the comparison
bar charts; images_near backs the draggable-marker image strips.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geo import GeoPoint, Polyline, Side, haversine_distance, intermediate_point

MIN_SEGMENT_LEN_M = 40.0
DEFAULT_SEGMENT_LEN_M = 200.0


@dataclass(frozen=True)
class RouteTrajectory:
    """One side of a route: geometry plus labeled samples at increasing distances."""

    route_id: str
    side: Side
    geometry: Polyline
    sample_ids: np.ndarray
    distances_m: np.ndarray
    patterns: np.ndarray
    catalog: str = ""

    def __post_init__(self):
        ids = np.asarray(self.sample_ids, dtype=np.int64)
        dist = np.asarray(self.distances_m, dtype=np.float64)
        pats = np.asarray(self.patterns, dtype=np.int64)
        if not (ids.shape == dist.shape == pats.shape):
            raise ValueError("sample ids, distances and patterns must align")
        if dist.size and np.any(np.diff(dist) <= 0):
            raise ValueError("along-route distances must be strictly increasing")
        object.__setattr__(self, "sample_ids", ids)
        object.__setattr__(self, "distances_m", dist)
        object.__setattr__(self, "patterns", pats)

    @property
    def length_m(self) -> float:
        return self.geometry.length_m()

    @property
    def sample_count(self) -> int:
        return int(self.sample_ids.size)


@dataclass(frozen=True)
class RouteSegment:
    start_m: float
    end_m: float
    geometry: Polyline
    dominant_pattern: int | None
    counts: dict[int, int]

    def __post_init__(self):
        if self.end_m <= self.start_m:
            raise ValueError("segment end must exceed start")


@dataclass(frozen=True)
class PatternDistribution:
    fractions: dict[int, float]
    length_m: float
    sample_count: int


@dataclass(frozen=True)
class RouteComparison:
    a: PatternDistribution
    b: PatternDistribution
    deltas: dict[int, float]


def _cut_geometry(line: Polyline, start_m: float, end_m: float) -> Polyline:
    """Sub-polyline covering [start_m, end_m] along the line, with interpolated ends."""
    points: list[GeoPoint] = []
    walked = 0.0
    for a, b in zip(line.points, line.points[1:]):
        leg = haversine_distance(a, b)
        leg_start, leg_end = walked, walked + leg
        walked = leg_end
        if leg_end <= start_m or leg_start >= end_m or leg == 0.0:
            continue
        lo = max(start_m, leg_start)
        hi = min(end_m, leg_end)
        p_lo = a if lo <= leg_start else intermediate_point(a, b, (lo - leg_start) / leg)
        p_hi = b if hi >= leg_end else intermediate_point(a, b, (hi - leg_start) / leg)
        if not points:
            points.append(p_lo)
        if p_hi != points[-1]:
            points.append(p_hi)
    if len(points) < 2:
        # degenerate slice at the route end; fall back to the closing leg
        points = [line.points[-2], line.points[-1]]
    return Polyline(points)


def _segment_bounds(length_m: float, seg_len_m: float) -> list[tuple[float, float]]:
    """Contiguous [start, end) bounds tiling [0, length]; short tails merge back."""
    if length_m <= seg_len_m:
        return [(0.0, length_m)]
    n_full = int(length_m // seg_len_m)
    remainder = length_m - n_full * seg_len_m
    bounds = [(i * seg_len_m, (i + 1) * seg_len_m) for i in range(n_full)]
    if remainder > 0:
        if remainder < seg_len_m / 2.0:
            start, _ = bounds[-1]
            bounds[-1] = (start, length_m)
        else:
            bounds.append((n_full * seg_len_m, length_m))
    return bounds


def dominant_pattern(labels: np.ndarray) -> int | None:
    """Majority label; ties resolve to the smaller pattern id."""
    if labels.size == 0:
        return None
    values, counts = np.unique(labels, return_counts=True)
    return int(values[np.argmax(counts)])


def segment_route(traj: RouteTrajectory, seg_len_m: float = DEFAULT_SEGMENT_LEN_M) -> list[RouteSegment]:
    """Tile the trajectory into segments and color each by its majority pattern.

    A final remainder shorter than seg_len_m/2 merges into its predecessor.
    Every sample falls in exactly one segment (half-open intervals, last
    segment closed at the route end).
    """
    if seg_len_m < MIN_SEGMENT_LEN_M:
        raise ValueError(f"segment length must be >= {MIN_SEGMENT_LEN_M} m")
    if traj.sample_count == 0:
        raise ValueError("cannot segment an empty trajectory")

    length = traj.length_m
    bounds = _segment_bounds(length, seg_len_m)
    segments = []
    for i, (start, end) in enumerate(bounds):
        if i == len(bounds) - 1:
            in_seg = (traj.distances_m >= start) & (traj.distances_m <= end)
        else:
            in_seg = (traj.distances_m >= start) & (traj.distances_m < end)
        labels = traj.patterns[in_seg]
        values, counts = np.unique(labels, return_counts=True)
        segments.append(
            RouteSegment(
                start_m=start,
                end_m=end,
                geometry=_cut_geometry(traj.geometry, start, end),
                dominant_pattern=dominant_pattern(labels),
                counts={int(v): int(c) for v, c in zip(values, counts)},
            )
        )
    return segments


def distribution(traj: RouteTrajectory) -> PatternDistribution:
    """Per-pattern share of the trajectory's samples, plus the route length."""
    if traj.sample_count == 0:
        raise ValueError("cannot summarize an empty trajectory")
    values, counts = np.unique(traj.patterns, return_counts=True)
    total = float(traj.sample_count)
    fractions = {int(v): float(c) / total for v, c in zip(values, counts)}
    return PatternDistribution(
        fractions=fractions, length_m=traj.length_m, sample_count=traj.sample_count
    )


def compare(a: RouteTrajectory, b: RouteTrajectory) -> RouteComparison:
    """Paired distributions with per-pattern share deltas (a minus b)."""
    if a.catalog != b.catalog:
        raise ValueError("trajectories come from different pattern catalogs")
    dist_a = distribution(a)
    dist_b = distribution(b)
    keys = sorted(set(dist_a.fractions) | set(dist_b.fractions))
    deltas = {k: dist_a.fractions.get(k, 0.0) - dist_b.fractions.get(k, 0.0) for k in keys}
    return RouteComparison(a=dist_a, b=dist_b, deltas=deltas)


def images_near(traj: RouteTrajectory, at_m: float, window: int) -> list[int]:
    """The window sample ids nearest to at_m, ordered by along-route distance.

    at_m outside [0, route length] is clamped.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if traj.sample_count == 0:
        return []
    at = min(max(at_m, 0.0), traj.length_m)
    gap = np.abs(traj.distances_m - at)
    # nearest first; equal gaps prefer the earlier sample
    order = np.lexsort((traj.distances_m, gap))
    chosen = np.sort(order[:window])
    return [int(traj.sample_ids[i]) for i in chosen]


def segments_to_geojson(
    traj: RouteTrajectory,
    segments: list[RouteSegment],
    colors: dict[int, str] | None = None,
) -> dict:
    """GeoJSON FeatureCollection: one LineString per segment with pattern properties."""
    features = []
    for seg in segments:
        props = {
            "route": traj.route_id,
            "side": traj.side.value,
            "start_m": seg.start_m,
            "end_m": seg.end_m,
            "dominant_pattern": seg.dominant_pattern,
            "counts": {str(k): v for k, v in sorted(seg.counts.items())},
        }
        if colors is not None:
            props["color"] = (
                colors.get(seg.dominant_pattern, "#BBBBBB")
                if seg.dominant_pattern is not None
                else "#BBBBBB"
            )
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[p.lon, p.lat] for p in seg.geometry.points],
                },
                "properties": props,
            }
        )
    return {"type": "FeatureCollection", "features": features}
