"""Published JSON Schemas for the HTTP API payloads and the GeoJSON export.

Clients may validate any response against these; the test suite does.
"""

from __future__ import annotations

_GEOPOINT = {
    "type": "object",
    "properties": {"lat": {"type": "number"}, "lon": {"type": "number"}},
    "required": ["lat", "lon"],
    "additionalProperties": False,
}

_LATLON_PAIR = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

_FRACTIONS = {
    "type": "object",
    "patternProperties": {"^[0-9]+$": {"type": "number", "minimum": 0, "maximum": 1}},
    "additionalProperties": False,
}

_COUNTS = {
    "type": "object",
    "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 0}},
    "additionalProperties": False,
}

_DISTRIBUTION = {
    "type": "object",
    "properties": {
        "fractions": _FRACTIONS,
        "length_m": {"type": "number", "minimum": 0},
        "sample_count": {"type": "integer", "minimum": 0},
    },
    "required": ["fractions", "length_m", "sample_count"],
    "additionalProperties": False,
}

_SEGMENT = {
    "type": "object",
    "properties": {
        "start_m": {"type": "number", "minimum": 0},
        "end_m": {"type": "number", "exclusiveMinimum": 0},
        "dominant": {"type": ["integer", "null"]},
        "color": {"type": "string", "pattern": "^#[0-9A-Fa-f]{6}$"},
        "counts": _COUNTS,
        "geometry": {"type": "array", "items": _LATLON_PAIR, "minItems": 2},
    },
    "required": ["start_m", "end_m", "dominant", "color", "counts", "geometry"],
    "additionalProperties": False,
}

_TRAJECTORY = {
    "type": "object",
    "properties": {
        "sample_count": {"type": "integer", "minimum": 0},
        "segments": {"type": "array", "items": _SEGMENT},
        "distribution": _DISTRIBUTION,
    },
    "required": ["sample_count", "segments", "distribution"],
    "additionalProperties": False,
}

ROUTE_SET_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "AnnotatedRouteSet",
    "type": "object",
    "properties": {
        "query": {
            "type": "object",
            "properties": {
                "region": {"type": "string"},
                "origin": _GEOPOINT,
                "destination": _GEOPOINT,
                "seg_len_m": {"type": "number", "minimum": 40},
            },
            "required": ["region", "origin", "destination", "seg_len_m"],
            "additionalProperties": False,
        },
        "routes": {
            "type": "array",
            "minItems": 1,
            "maxItems": 3,
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "index": {"type": "integer", "minimum": 1},
                    "length_m": {"type": "number", "minimum": 0},
                    "geometry": {"type": "array", "items": _LATLON_PAIR, "minItems": 2},
                    "legs": {"type": "array", "items": {"type": "object"}},
                    "trajectories": {
                        "type": "object",
                        "properties": {"L": _TRAJECTORY, "R": _TRAJECTORY},
                        "required": ["L", "R"],
                        "additionalProperties": False,
                    },
                },
                "required": ["id", "index", "length_m", "geometry", "legs", "trajectories"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["query", "routes"],
    "additionalProperties": False,
}

_PATTERN = {
    "type": "object",
    "properties": {
        "id": {"type": "integer", "minimum": 0},
        "vector": {
            "type": "array",
            "items": {"type": "number", "minimum": 0, "maximum": 1},
            "minItems": 6,
            "maxItems": 6,
        },
        "pattern_image": {"type": "integer", "minimum": 0},
        "name": {"type": "string", "minLength": 1},
        "color": {"type": "string", "pattern": "^#[0-9A-Fa-f]{6}$"},
        "member_count": {"type": "integer", "minimum": 1},
        "samples": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
    "required": ["id", "vector", "pattern_image", "name", "color", "member_count", "samples"],
    "additionalProperties": False,
}

PATTERNS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "PatternCatalog",
    "type": "object",
    "properties": {
        "region": {"type": "string"},
        "patterns": {"type": "array", "minItems": 1, "items": _PATTERN},
        "provenance": {"type": "object"},
    },
    "required": ["region", "patterns", "provenance"],
    "additionalProperties": False,
}

IMAGES_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "RouteImages",
    "type": "object",
    "properties": {
        "route": {"type": "string"},
        "side": {"enum": ["L", "R"]},
        "at_m": {"type": "number", "minimum": 0},
        "window": {"type": "integer", "minimum": 1},
        "samples": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "lat": {"type": "number"},
                    "lon": {"type": "number"},
                    "view_angle_deg": {"type": "number"},
                    "distance_m": {"type": "number", "minimum": 0},
                    "pattern": {"type": "integer", "minimum": 0},
                    "image": {"type": ["string", "null"]},
                },
                "required": ["id", "lat", "lon", "view_angle_deg", "distance_m", "pattern", "image"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["route", "side", "at_m", "window", "samples"],
    "additionalProperties": False,
}

REGIONS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Regions",
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "id": {"type": "string"},
            "sample_count": {"type": "integer", "minimum": 0},
            "bbox": {
                "type": ["array", "null"],
                "items": {"type": "number"},
                "minItems": 4,
                "maxItems": 4,
            },
            "patterns": {"type": "integer", "minimum": 0},
        },
        "required": ["id", "sample_count", "bbox", "patterns"],
        "additionalProperties": False,
    },
}

GEOJSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "SegmentExport",
    "type": "object",
    "properties": {
        "type": {"const": "FeatureCollection"},
        "features": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "type": {"const": "Feature"},
                    "geometry": {
                        "type": "object",
                        "properties": {
                            "type": {"const": "LineString"},
                            "coordinates": {
                                "type": "array",
                                "items": _LATLON_PAIR,
                                "minItems": 2,
                            },
                        },
                        "required": ["type", "coordinates"],
                    },
                    "properties": {"type": "object"},
                },
                "required": ["type", "geometry", "properties"],
            },
        },
    },
    "required": ["type", "features"],
}
