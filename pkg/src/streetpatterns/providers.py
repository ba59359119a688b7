"""Route providers, the encoded-polyline codec, and image fetch planning.

Candidate routes come from a provider behind a small interface: the
fixture provider replays a JSON document from disk (the default, and the
only one tests touch), while the live provider calls a Directions-style
HTTP API using one API key read from the environment. Both normalize to
the same response shape.

Fixture document schema::

    {
      "origin": [lat, lon],
      "destination": [lat, lon],
      "routes": [
        {"geometry": {"type": "coordinates", "value": [[lat, lon], ...]},
         "legs": [{"summary": "...", "distance_m": 123.0}]},
        {"geometry": {"type": "encoded_polyline", "value": "_p~iF~ps|U..."}}
      ]
    }
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

from . import jsonio
from .geo import GeoPoint, Polyline, SamplePoint, Side


class ProviderError(RuntimeError):
    """The provider failed or returned something unusable."""


# ---------------------------------------------------------------------------
# encoded polylines (Google algorithm, precision 5 by default)


def encode_polyline(points: Sequence[GeoPoint], precision: int = 5) -> str:
    factor = 10**precision
    out = []
    prev_lat = prev_lon = 0
    for p in points:
        lat = round(p.lat * factor)
        lon = round(p.lon * factor)
        for delta in (lat - prev_lat, lon - prev_lon):
            value = ~(delta << 1) if delta < 0 else delta << 1
            while value >= 0x20:
                out.append(chr((0x20 | (value & 0x1F)) + 63))
                value >>= 5
            out.append(chr(value + 63))
        prev_lat, prev_lon = lat, lon
    return "".join(out)


def decode_polyline(encoded: str, precision: int = 5) -> list[GeoPoint]:
    factor = 10**precision
    points = []
    index = lat = lon = 0
    while index < len(encoded):
        deltas = []
        for _ in range(2):
            shift = result = 0
            while True:
                if index >= len(encoded):
                    raise ProviderError("truncated encoded polyline")
                byte = ord(encoded[index]) - 63
                index += 1
                result |= (byte & 0x1F) << shift
                shift += 5
                if byte < 0x20:
                    break
            deltas.append(~(result >> 1) if result & 1 else result >> 1)
        lat += deltas[0]
        lon += deltas[1]
        points.append(GeoPoint(lat / factor, lon / factor))
    return points


# ---------------------------------------------------------------------------
# provider responses


@dataclass(frozen=True)
class CandidateRoute:
    geometry: Polyline
    legs: tuple[dict, ...] = ()


@dataclass(frozen=True)
class RouteProviderResponse:
    origin: GeoPoint
    destination: GeoPoint
    routes: tuple[CandidateRoute, ...]

    def __post_init__(self):
        if not self.routes:
            raise ProviderError("provider returned zero routes")


def parse_provider_response(raw: dict) -> RouteProviderResponse:
    """Normalize a raw provider document to decoded polylines."""
    try:
        origin = GeoPoint(*raw["origin"])
        destination = GeoPoint(*raw["destination"])
        route_docs = raw["routes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ProviderError(f"malformed provider document: {exc}") from exc
    if not route_docs:
        raise ProviderError("provider returned zero routes")

    routes = []
    for i, doc in enumerate(route_docs):
        geom = doc.get("geometry", {})
        kind = geom.get("type")
        value = geom.get("value")
        try:
            if kind == "coordinates":
                points = [GeoPoint(lat, lon) for lat, lon in value]
            elif kind == "encoded_polyline":
                points = decode_polyline(value)
            else:
                raise ProviderError(f"route {i}: unknown geometry type {kind!r}")
            polyline = Polyline(points)
        except ProviderError:
            raise
        except (TypeError, ValueError) as exc:
            raise ProviderError(f"route {i}: malformed geometry ({exc})") from exc
        routes.append(CandidateRoute(geometry=polyline, legs=tuple(doc.get("legs", ()))))
    return RouteProviderResponse(origin=origin, destination=destination, routes=tuple(routes))


class RouteProvider(Protocol):
    def get_routes(self, origin: GeoPoint, destination: GeoPoint) -> RouteProviderResponse: ...


class FixtureRouteProvider:
    """Replays a fixture document; origin/destination arguments are echoed back."""

    def __init__(self, source: str | Path | dict):
        self._doc = source if isinstance(source, dict) else jsonio.read_json(source)

    def get_routes(self, origin: GeoPoint, destination: GeoPoint) -> RouteProviderResponse:
        parsed = parse_provider_response(self._doc)
        return RouteProviderResponse(
            origin=origin, destination=destination, routes=parsed.routes
        )


API_KEY_ENV = "STREETPATTERNS_API_KEY"
DIRECTIONS_URL = "https://maps.googleapis.com/maps/api/directions/json"


class LiveRouteProvider:
    """Directions-style HTTP client; opt-in, keyed by one environment variable."""

    def __init__(self, url: str = DIRECTIONS_URL, timeout_s: float = 10.0):
        self.url = url
        self.timeout_s = timeout_s
        self.api_key = os.environ.get(API_KEY_ENV)
        if not self.api_key:
            raise ProviderError(f"live provider needs {API_KEY_ENV} set")

    def get_routes(self, origin: GeoPoint, destination: GeoPoint) -> RouteProviderResponse:
        import requests

        params = {
            "origin": f"{origin.lat},{origin.lon}",
            "destination": f"{destination.lat},{destination.lon}",
            "alternatives": "true",
            "key": self.api_key,
        }
        try:
            resp = requests.get(self.url, params=params, timeout=self.timeout_s)
            resp.raise_for_status()
            body = resp.json()
        except Exception as exc:
            raise ProviderError(f"live provider request failed: {exc}") from exc
        routes = [
            {
                "geometry": {
                    "type": "encoded_polyline",
                    "value": r["overview_polyline"]["points"],
                },
                "legs": [
                    {"summary": r.get("summary", ""), "distance_m": leg["distance"]["value"]}
                    for leg in r.get("legs", [])
                ],
            }
            for r in body.get("routes", [])
        ]
        return parse_provider_response(
            {
                "origin": [origin.lat, origin.lon],
                "destination": [destination.lat, destination.lon],
                "routes": routes,
            }
        )


# ---------------------------------------------------------------------------
# image fetch planning


@dataclass(frozen=True)
class FetchRequest:
    sample_id: int
    location: GeoPoint
    heading_deg: float
    width: int
    height: int


@dataclass(frozen=True)
class FetchPlan:
    requests: tuple[FetchRequest, ...]
    image_size: tuple[int, int] = field(default=(300, 300))


def build_fetch_plan(
    samples: Sequence[SamplePoint], image_size: tuple[int, int] = (300, 300)
) -> FetchPlan:
    """One image request per sample point, ordered by chunk then Left before Right."""
    ordered = sorted(samples, key=lambda s: (s.chunk_index, s.side != Side.LEFT))
    width, height = image_size
    requests = tuple(
        FetchRequest(
            sample_id=i,
            location=s.location,
            heading_deg=s.view_angle_deg,
            width=width,
            height=height,
        )
        for i, s in enumerate(ordered)
    )
    return FetchPlan(requests=requests, image_size=image_size)


def fetch_plan_to_dict(plan: FetchPlan) -> dict:
    return {
        "image_size": list(plan.image_size),
        "requests": [
            {
                "sample_id": r.sample_id,
                "lat": r.location.lat,
                "lon": r.location.lon,
                "heading_deg": r.heading_deg,
                "width": r.width,
                "height": r.height,
            }
            for r in plan.requests
        ],
    }


def fetch_plan_from_dict(doc: dict) -> FetchPlan:
    size = tuple(doc["image_size"])
    requests = tuple(
        FetchRequest(
            sample_id=int(r["sample_id"]),
            location=GeoPoint(r["lat"], r["lon"]),
            heading_deg=float(r["heading_deg"]),
            width=int(r["width"]),
            height=int(r["height"]),
        )
        for r in doc["requests"]
    )
    return FetchPlan(requests=requests, image_size=size)
