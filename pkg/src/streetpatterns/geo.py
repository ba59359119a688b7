"""Great-circle geometry for route chunking and side-view sampling.

All coordinates are decimal degrees on a sphere of radius 6 371 000 m.
Routes arrive as polylines; each leg between consecutive points is divided
into ~20 m chunks, and every chunk yields one left-side and one right-side
view angle at its mid-location. Everything here is a pure function over
immutable inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

EARTH_RADIUS_M = 6_371_000.0

# Below this separation a bearing is numerically meaningless.
MIN_BEARING_SEPARATION_M = 0.01

DEFAULT_CHUNK_LEN_M = 20.0

# Chunks shorter than this are merged into their predecessor.
MIN_CHUNK_LEN_M = 1.0


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in degrees; lat in [-90, 90], lon in (-180, 180]."""

    lat: float
    lon: float

    def __post_init__(self):
        if math.isnan(self.lat) or math.isnan(self.lon):
            raise ValueError("GeoPoint coordinates must not be NaN")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 < self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside (-180, 180]")


@dataclass(frozen=True)
class Polyline:
    """An ordered sequence of at least two points with no consecutive duplicates."""

    points: tuple[GeoPoint, ...]

    def __init__(self, points: Iterable[GeoPoint]):
        pts = tuple(points)
        if len(pts) < 2:
            raise ValueError("polyline needs at least 2 points")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError("polyline has two consecutive identical points")
        object.__setattr__(self, "points", pts)

    def length_m(self) -> float:
        return sum(haversine_distance(a, b) for a, b in zip(self.points, self.points[1:]))


@dataclass(frozen=True)
class Chunk:
    """A short geodesic piece of one polyline leg with a single heading."""

    index: int
    start: GeoPoint
    end: GeoPoint
    mid: GeoPoint
    heading_deg: float
    length_m: float


@dataclass(frozen=True)
class SamplePoint:
    """A chunk mid-location paired with a left or right view angle."""

    chunk_index: int
    location: GeoPoint
    side: Side
    view_angle_deg: float


def haversine_distance(p1: GeoPoint, p2: GeoPoint) -> float:
    """Great-circle distance between two points in metres.

    Symmetric and non-negative; sub-metre ellipsoidal effects are ignored
    because the sampling lattice works at ~20 m resolution.
    """
    phi1 = math.radians(p1.lat)
    phi2 = math.radians(p2.lat)
    d_phi = math.radians(p2.lat - p1.lat)
    d_lam = math.radians(p2.lon - p1.lon)
    a = math.sin(d_phi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(d_lam / 2) ** 2
    return EARTH_RADIUS_M * 2.0 * math.atan2(math.sqrt(a), math.sqrt(1.0 - a))


def bearing(p1: GeoPoint, p2: GeoPoint) -> float:
    """Initial great-circle bearing from p1 to p2, clockwise from true north.

    Uses the signed longitude difference so east- and westbound headings are
    distinguished (an absolute difference would fold them together and flip
    every westbound left/right view angle).

    Returns degrees in [0, 360). Raises ValueError for (near-)coincident points.
    """
    if haversine_distance(p1, p2) <= MIN_BEARING_SEPARATION_M:
        raise ValueError(f"bearing undefined for coincident points {p1} and {p2}")
    phi1 = math.radians(p1.lat)
    phi2 = math.radians(p2.lat)
    d_lam = math.radians(p2.lon - p1.lon)
    x = math.sin(d_lam) * math.cos(phi2)
    y = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(d_lam)
    return (math.degrees(math.atan2(x, y)) + 360.0) % 360.0


def intermediate_point(p1: GeoPoint, p2: GeoPoint, fraction: float) -> GeoPoint:
    """Point a given fraction of the way from p1 to p2 along the great circle.

    Spherical linear interpolation, so the result lies exactly on the
    geodesic between the two points.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction {fraction} outside [0, 1]")
    phi1, lam1 = math.radians(p1.lat), math.radians(p1.lon)
    phi2, lam2 = math.radians(p2.lat), math.radians(p2.lon)
    delta = haversine_distance(p1, p2) / EARTH_RADIUS_M
    if delta == 0.0:
        return p1
    sin_d = math.sin(delta)
    a = math.sin((1.0 - fraction) * delta) / sin_d
    b = math.sin(fraction * delta) / sin_d
    x = a * math.cos(phi1) * math.cos(lam1) + b * math.cos(phi2) * math.cos(lam2)
    y = a * math.cos(phi1) * math.sin(lam1) + b * math.cos(phi2) * math.sin(lam2)
    z = a * math.sin(phi1) + b * math.sin(phi2)
    lat = math.degrees(math.atan2(z, math.hypot(x, y)))
    lon = math.degrees(math.atan2(y, x))
    if lon <= -180.0:
        lon += 360.0
    return GeoPoint(lat, lon)


def destination_point(p: GeoPoint, bearing_deg: float, distance_m: float) -> GeoPoint:
    """Point reached from p after travelling distance_m on the given bearing."""
    delta = distance_m / EARTH_RADIUS_M
    theta = math.radians(bearing_deg)
    phi1 = math.radians(p.lat)
    lam1 = math.radians(p.lon)
    phi2 = math.asin(
        math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(theta)
    )
    lam2 = lam1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * math.sin(phi2),
    )
    lon = math.degrees(lam2)
    lon = (lon + 180.0) % 360.0 - 180.0
    if lon == -180.0:
        lon = 180.0
    return GeoPoint(math.degrees(phi2), lon)


def chunk_polyline(line: Polyline, target_len_m: float = DEFAULT_CHUNK_LEN_M) -> list[Chunk]:
    """Divide a polyline into contiguous chunks of roughly target_len_m metres.

    Each leg (consecutive point pair) of length L is split into
    ceil(L / target_len_m) equal chunks, so no chunk straddles a corner and
    every chunk has a single well-defined heading. Chunks shorter than 1 m
    are merged into their predecessor; legs under 1 cm are dropped. Returns
    an empty list when the whole polyline is degenerate (< 1 cm).
    """
    if target_len_m <= 0.0:
        raise ValueError("target_len_m must be positive")
    if line.length_m() < MIN_BEARING_SEPARATION_M:
        return []

    chunks: list[Chunk] = []
    for leg_start, leg_end in zip(line.points, line.points[1:]):
        leg_len = haversine_distance(leg_start, leg_end)
        if leg_len < MIN_BEARING_SEPARATION_M:
            continue
        # 1e-9 slack keeps float noise from pushing an exact multiple (a
        # nominal 100 m leg measuring 100.0000000001 m) over the ceil
        n = max(1, math.ceil(leg_len / target_len_m - 1e-9))
        piece_len = leg_len / n
        for i in range(n):
            start = leg_start if i == 0 else intermediate_point(leg_start, leg_end, i / n)
            end = leg_end if i == n - 1 else intermediate_point(leg_start, leg_end, (i + 1) / n)
            if piece_len < MIN_CHUNK_LEN_M and chunks:
                chunks[-1] = _extend_chunk(chunks[-1], end, piece_len)
                continue
            mid = intermediate_point(leg_start, leg_end, (i + 0.5) / n)
            chunks.append(
                Chunk(
                    index=len(chunks),
                    start=start,
                    end=end,
                    mid=mid,
                    heading_deg=bearing(start, end),
                    length_m=piece_len,
                )
            )
    return chunks


def _extend_chunk(chunk: Chunk, new_end: GeoPoint, extra_len_m: float) -> Chunk:
    # Mid is recomputed on the start->end geodesic; length stays the
    # along-path sum so chunk lengths still add up to the polyline length.
    return Chunk(
        index=chunk.index,
        start=chunk.start,
        end=new_end,
        mid=intermediate_point(chunk.start, new_end, 0.5),
        heading_deg=bearing(chunk.start, new_end),
        length_m=chunk.length_m + extra_len_m,
    )


def left_view_angle(heading_deg: float) -> float:
    return (heading_deg - 90.0) % 360.0


def right_view_angle(heading_deg: float) -> float:
    return (heading_deg + 90.0) % 360.0


def sample_points(chunks: Sequence[Chunk]) -> list[SamplePoint]:
    """Two side-view sample points per chunk, at the chunk mid-location.

    Emitted in chunk order, left before right, which is also the image
    fetch-plan order.
    """
    samples: list[SamplePoint] = []
    for chunk in chunks:
        samples.append(
            SamplePoint(chunk.index, chunk.mid, Side.LEFT, left_view_angle(chunk.heading_deg))
        )
        samples.append(
            SamplePoint(chunk.index, chunk.mid, Side.RIGHT, right_view_angle(chunk.heading_deg))
        )
    return samples
