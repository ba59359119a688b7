"""Binary feature-matrix files and u32 label arrays.

Matrix layout: magic ``VIVF`` (4 bytes), version u16 LE (currently 1),
kind u16 LE (0=Category19, 1=Category6, 2=Latent), rows u32 LE, cols u32 LE,
then rows*cols float32 LE values, row-major. Row index is the sample id.
Label files are bare little-endian u32 arrays.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .features import FeatureKind, FeatureMatrix

MAGIC = b"VIVF"
VERSION = 1

_HEADER = struct.Struct("<4sHHII")


class FormatError(ValueError):
    """A file does not conform to the binary layout; message names the file."""


def write_matrix(path: str | Path, matrix: FeatureMatrix) -> None:
    path = Path(path)
    data = np.ascontiguousarray(matrix.data, dtype="<f4")
    header = _HEADER.pack(MAGIC, VERSION, int(matrix.kind), matrix.rows, matrix.cols)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())


def read_matrix(path: str | Path) -> FeatureMatrix:
    path = Path(path)
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise FormatError(f"{path}: truncated header")
        magic, version, kind, rows, cols = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        try:
            kind = FeatureKind(kind)
        except ValueError:
            raise FormatError(f"{path}: unknown matrix kind {kind}") from None
        body = fh.read()
    expected = rows * cols * 4
    if len(body) != expected:
        raise FormatError(f"{path}: expected {expected} data bytes, found {len(body)}")
    data = np.frombuffer(body, dtype="<f4").reshape(rows, cols)
    return FeatureMatrix(kind=kind, data=data)


def write_labels(path: str | Path, labels) -> None:
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError("label array must be 1-D")
    if arr.size and arr.min() < 0:
        raise ValueError("labels must be non-negative")
    with open(path, "wb") as fh:
        fh.write(np.ascontiguousarray(arr, dtype="<u4").tobytes())


def read_labels(path: str | Path) -> np.ndarray:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) % 4 != 0:
        raise FormatError(f"{path}: size {len(raw)} is not a multiple of 4")
    return np.frombuffer(raw, dtype="<u4").astype(np.int64)
