"""Binary weight files.

Layout: magic "RLAODW1\\0", u32 LE layer count, then per layer u32 rows,
u32 cols, rows*cols f32 LE row-major weights (rows = outputs), rows f32
biases. In-memory weights are (n_in, n_out), so they are transposed on
the way through.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import WeightFormatError
from .mlp import MlpParams

MAGIC = b"RLAODW1\x00"


def save_params(params: MlpParams, path: str | Path) -> None:
    parts = [MAGIC, struct.pack("<I", len(params.weights))]
    for w, b in zip(params.weights, params.biases):
        rows, cols = w.shape[1], w.shape[0]  # stored as (out, in)
        parts.append(struct.pack("<II", rows, cols))
        parts.append(np.ascontiguousarray(w.T, dtype="<f4").tobytes())
        parts.append(np.asarray(b, dtype="<f4").tobytes())
    Path(path).write_bytes(b"".join(parts))


def load_params(path: str | Path) -> MlpParams:
    data = Path(path).read_bytes()
    if len(data) < len(MAGIC) + 4 or not data.startswith(MAGIC):
        raise WeightFormatError(f"{path}: bad magic")
    pos = len(MAGIC)
    (n_layers,) = struct.unpack_from("<I", data, pos)
    pos += 4
    if n_layers == 0:
        raise WeightFormatError(f"{path}: zero layers")

    weights, biases = [], []
    for _ in range(n_layers):
        if pos + 8 > len(data):
            raise WeightFormatError(f"{path}: truncated layer header")
        rows, cols = struct.unpack_from("<II", data, pos)
        pos += 8
        if rows == 0 or cols == 0:
            raise WeightFormatError(f"{path}: degenerate layer shape {rows}x{cols}")
        need = 4 * (rows * cols + rows)
        if pos + need > len(data):
            raise WeightFormatError(f"{path}: truncated layer data")
        w = np.frombuffer(data, dtype="<f4", count=rows * cols, offset=pos)
        pos += 4 * rows * cols
        b = np.frombuffer(data, dtype="<f4", count=rows, offset=pos)
        pos += 4 * rows
        weights.append(w.reshape(rows, cols).T.astype(np.float64))
        biases.append(b.astype(np.float64))
    if pos != len(data):
        raise WeightFormatError(f"{path}: {len(data) - pos} trailing bytes")

    sizes = [weights[0].shape[0]] + [w.shape[1] for w in weights]
    for i in range(1, n_layers):
        if weights[i].shape[0] != sizes[i]:
            raise WeightFormatError(f"{path}: layer {i} input does not chain")
    return MlpParams(layer_sizes=tuple(sizes), weights=weights, biases=biases)
