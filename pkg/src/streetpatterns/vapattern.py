"""Appearance patterns built from a fitted cluster model.

Each cluster becomes one pattern: the mean of its members' six-category
vectors (the pattern vector), the member image closest to that mean (the
pattern image), a user-editable name, and a unique display color. Patterns
keep their cluster label as id, so route annotations and the catalog stay
in step. Clustering may have run on latent vectors; the pattern vector is
always computed from the six-category matrix so radar charts read as
semantic shares.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

import numpy as np

from .cluster import ClusterModel
from .features import FeatureKind, FeatureMatrix

# Colorblind-safe default palette (Wong), assigned by pattern id.
DEFAULT_PALETTE = (
    "#E69F00",
    "#56B4E9",
    "#009E73",
    "#F0E442",
    "#0072B2",
    "#D55E00",
    "#CC79A7",
    "#999999",
)

_HEX_COLOR = re.compile(r"^#[0-9A-Fa-f]{6}$")

DEFAULT_SAMPLE_IMAGES = 8


@dataclass(frozen=True)
class VaPattern:
    id: int
    vector: tuple[float, ...]
    pattern_image: int
    name: str
    color: str
    member_count: int
    sample_image_ids: tuple[int, ...]


@dataclass(frozen=True)
class PatternCatalog:
    region: str
    patterns: tuple[VaPattern, ...]
    provenance: dict

    def get(self, pattern_id: int) -> VaPattern:
        for p in self.patterns:
            if p.id == pattern_id:
                return p
        raise KeyError(f"unknown pattern id {pattern_id}")

    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.patterns)


def build_patterns(
    model: ClusterModel,
    cat6: FeatureMatrix,
    region: str = "",
    sample_images: int = DEFAULT_SAMPLE_IMAGES,
) -> PatternCatalog:
    """One pattern per cluster, from member means of the six-category matrix.

    The pattern image is the member whose vector is euclidean-closest to
    the pattern vector (ties to the smaller sample id); sample_image_ids
    are the nearest members in the same ordering, capped at sample_images.
    """
    if cat6.kind != FeatureKind.CATEGORY6:
        raise ValueError("pattern vectors require a Category6 matrix")
    if cat6.rows != model.assignments.shape[0]:
        raise ValueError("category matrix rows do not match assignment count")

    data = np.asarray(cat6.data, dtype=np.float64)
    patterns = []
    for label in range(model.k_effective):
        member_ids = np.flatnonzero(model.assignments == label)
        members = data[member_ids]
        mean = members.mean(axis=0)
        dist = np.linalg.norm(members - mean, axis=1)
        # argsort on (distance, sample id) keeps ties deterministic
        order = np.lexsort((member_ids, dist))
        ranked = member_ids[order]
        patterns.append(
            VaPattern(
                id=label,
                vector=tuple(float(x) for x in mean),
                pattern_image=int(ranked[0]),
                name=f"VaPattern {label + 1}",
                color=DEFAULT_PALETTE[label % len(DEFAULT_PALETTE)],
                member_count=int(member_ids.size),
                sample_image_ids=tuple(int(i) for i in ranked[:sample_images]),
            )
        )
    provenance = {
        "method": model.method.value,
        "k": model.k_effective,
        "metric": model.metric.value,
        "seed": model.seed,
    }
    return PatternCatalog(region=region, patterns=tuple(patterns), provenance=provenance)


def rename_pattern(catalog: PatternCatalog, pattern_id: int, name: str) -> PatternCatalog:
    pattern = catalog.get(pattern_id)
    if not name:
        raise ValueError("pattern name must not be empty")
    return _replace_pattern(catalog, replace(pattern, name=name))


def recolor_pattern(catalog: PatternCatalog, pattern_id: int, color: str) -> PatternCatalog:
    pattern = catalog.get(pattern_id)
    if not _HEX_COLOR.match(color):
        raise ValueError(f"color {color!r} is not #RRGGBB")
    normalized = color.upper()
    for other in catalog.patterns:
        if other.id != pattern_id and other.color.upper() == normalized:
            raise ValueError(f"color {color} already used by pattern {other.id}")
    return _replace_pattern(catalog, replace(pattern, color=normalized))


def _replace_pattern(catalog: PatternCatalog, updated: VaPattern) -> PatternCatalog:
    patterns = tuple(updated if p.id == updated.id else p for p in catalog.patterns)
    return replace(catalog, patterns=patterns)


def catalog_to_dict(catalog: PatternCatalog) -> dict:
    return {
        "region": catalog.region,
        "patterns": [
            {
                "id": p.id,
                "vector": list(p.vector),
                "pattern_image": p.pattern_image,
                "name": p.name,
                "color": p.color,
                "member_count": p.member_count,
                "samples": list(p.sample_image_ids),
            }
            for p in catalog.patterns
        ],
        "provenance": catalog.provenance,
    }


def catalog_from_dict(doc: dict) -> PatternCatalog:
    patterns = tuple(
        VaPattern(
            id=int(p["id"]),
            vector=tuple(float(x) for x in p["vector"]),
            pattern_image=int(p["pattern_image"]),
            name=p["name"],
            color=p["color"],
            member_count=int(p["member_count"]),
            sample_image_ids=tuple(int(i) for i in p["samples"]),
        )
        for p in doc["patterns"]
    )
    return PatternCatalog(region=doc["region"], patterns=patterns, provenance=doc["provenance"])
