"""Canonical JSON serialization.

Every JSON artifact (manifests, catalogs, API responses, GeoJSON exports)
is written through canonical_dumps so that identical content always
produces identical bytes: sorted keys, compact separators, UTF-8, one
trailing newline in files.
"""

from __future__ import annotations

import json
from pathlib import Path


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj) + "\n", encoding="utf-8")


def read_json(path: str | Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
