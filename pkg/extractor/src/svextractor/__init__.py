"""Offline feature dumper for street-view regions.

Reads a region's samples.jsonl and image files, runs a segmentation
backend over every image, and writes PNG label masks plus the binary
feature matrices (19-category histograms and backbone latent vectors)
in the region's interchange format. Row i of each matrix always
corresponds to sample id i; unreadable images produce zero rows and an
entry in the machine-readable extraction log.
"""

from .backends import SegmentationBackend, ToyBackend, load_backend
from .run import ExtractionAborted, ExtractionJob, run_extraction

__all__ = [
    "ExtractionAborted",
    "ExtractionJob",
    "SegmentationBackend",
    "ToyBackend",
    "load_backend",
    "run_extraction",
]
