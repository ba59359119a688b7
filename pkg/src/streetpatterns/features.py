"""Quantitative image encodings.

A segmentation label mask becomes a 19-component category histogram (the
fraction of pixels per class, classes in the frozen order below). The six
major categories are a fixed projection of that histogram, and a
dispersion-ratio analysis (arithmetic over geometric mean per column)
selects the relevant columns of a feature matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

# Frozen class order; row/column positions are part of the dataset format.
CLASS_NAMES = (
    "road",
    "sidewalk",
    "building",
    "wall",
    "fence",
    "pole",
    "traffic light",
    "traffic sign",
    "vegetation",
    "terrain",
    "sky",
    "person",
    "rider",
    "car",
    "truck",
    "bus",
    "train",
    "motorcycle",
    "bicycle",
)
NUM_CLASSES = len(CLASS_NAMES)

MAJOR_NAMES = ("road", "sidewalk", "building", "vegetation", "terrain", "sky")
MAJOR_INDICES = tuple(CLASS_NAMES.index(name) for name in MAJOR_NAMES)

# Additive shift applied before the geometric mean; without it a single
# image lacking a category zeroes the whole column's GM.
DISPERSION_EPS = 1e-9


class FeatureKind(enum.IntEnum):
    CATEGORY19 = 0
    CATEGORY6 = 1
    LATENT = 2


@dataclass(frozen=True)
class LabelMask:
    """A row-major grid of class ids in [0, NUM_CLASSES)."""

    labels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.labels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("label mask must be a non-empty 2-D grid")
        if arr.min() < 0 or arr.max() >= NUM_CLASSES:
            raise ValueError(f"label mask contains class ids outside [0, {NUM_CLASSES})")
        object.__setattr__(self, "labels", arr)

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


@dataclass(frozen=True)
class FeatureMatrix:
    """Row-per-sample feature matrix; row index is the sample id."""

    kind: FeatureKind
    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError("feature matrix must be 2-D")
        if not np.all(np.isfinite(arr)):
            raise ValueError("feature matrix contains non-finite values")
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class FeatureSelection:
    """Selected column indices plus the full per-column ratio table for audit."""

    selected: tuple[int, ...]
    ratios: np.ndarray = field(repr=False)
    cutoff: float = 1.0


def category_histogram(mask: LabelMask) -> np.ndarray:
    """Fraction of pixels per class, as a length-19 float64 vector summing to 1."""
    counts = np.bincount(mask.labels.ravel(), minlength=NUM_CLASSES)
    return counts / float(mask.labels.size)


def reduce_to_major(v: np.ndarray) -> np.ndarray:
    """Project 19-component vectors onto the six major categories.

    Accepts a single vector or a matrix with 19 columns; components are
    copied, never renormalized, so a 6-vector generally sums to less than 1.
    """
    arr = np.asarray(v)
    if arr.shape[-1] != NUM_CLASSES:
        raise ValueError(f"expected {NUM_CLASSES} components, got {arr.shape[-1]}")
    return arr[..., list(MAJOR_INDICES)]


def dispersion_ratios(m: FeatureMatrix | np.ndarray) -> np.ndarray:
    """Per-column arithmetic-mean / geometric-mean ratio.

    Columns are shifted by DISPERSION_EPS before the geometric mean. By the
    AM-GM inequality every ratio is >= 1; a constant column scores exactly 1
    and a widely varying column scores high.
    """
    data = m.data if isinstance(m, FeatureMatrix) else np.asarray(m, dtype=np.float64)
    if data.shape[0] < 2:
        raise ValueError("dispersion ratios need at least 2 rows")
    if np.any(data < 0):
        raise ValueError("dispersion ratios are defined for non-negative features only")
    shifted = data.astype(np.float64) + DISPERSION_EPS
    am = shifted.mean(axis=0)
    gm = np.exp(np.log(shifted).mean(axis=0))
    ratios = am / gm
    # AM equals GM for a constant column by definition; exp/log round-off
    # must not push it past a cutoff of exactly 1.0
    constant = data.max(axis=0) == data.min(axis=0)
    ratios[constant] = 1.0
    return ratios


def select_features(m: FeatureMatrix | np.ndarray, cutoff: float = 1.0) -> FeatureSelection:
    """Columns whose dispersion ratio exceeds the cutoff, best first.

    Ties in the ratio are broken by ascending column index. The returned
    report keeps all per-column ratios so a selection can be audited.
    """
    if isinstance(m, FeatureMatrix) and m.kind != FeatureKind.CATEGORY19:
        raise ValueError("feature selection runs on a Category19 matrix")
    ratios = dispersion_ratios(m)
    order = np.argsort(-ratios, kind="stable")
    selected = tuple(int(j) for j in order if ratios[j] > cutoff)
    return FeatureSelection(selected=selected, ratios=ratios, cutoff=cutoff)
