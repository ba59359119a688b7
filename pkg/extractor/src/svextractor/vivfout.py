"""Writer for the region interchange formats.

Matrix files: magic ``VIVF``, version u16 LE (=1), kind u16 LE
(0=Category19, 1=Category6, 2=Latent), rows u32 LE, cols u32 LE, then
row-major float32 LE. Written atomically (temp file + rename).
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

MAGIC = b"VIVF"
VERSION = 1
KIND_CATEGORY19 = 0
KIND_CATEGORY6 = 1
KIND_LATENT = 2

_HEADER = struct.Struct("<4sHHII")


def write_matrix(path: str | Path, kind: int, data: np.ndarray) -> None:
    path = Path(path)
    arr = np.ascontiguousarray(data, dtype="<f4")
    if arr.ndim != 2:
        raise ValueError("matrix must be 2-D")
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, kind, arr.shape[0], arr.shape[1]))
        fh.write(arr.tobytes())
    os.replace(tmp, path)
