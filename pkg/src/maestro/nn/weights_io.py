"""Weight file IO.

Layout: magic "MAES" | u32 LE version=1 | u32 LE tensor count | per tensor:
u32 LE rank, rank x u32 LE dims, then float32 LE data. Round trips are
byte-exact because weights are stored as float32 end to end.
"""

from __future__ import annotations

import struct

import numpy as np

from maestro.errors import FormatError
from maestro.nn.net import WEIGHT_FORMAT_VERSION, ModelParams, param_shapes
from maestro.nn.spec import ModelSpec

MAGIC = b"MAES"


def save_weights(params: ModelParams, path: str) -> None:
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<II", WEIGHT_FORMAT_VERSION, len(params.weights))
    for w in params.weights:
        blob += struct.pack("<I", w.ndim)
        blob += struct.pack(f"<{w.ndim}I", *w.shape)
        blob += np.ascontiguousarray(w, dtype=np.float32).tobytes()
    with open(path, "wb") as fh:
        fh.write(blob)


def load_weights(path: str, spec: ModelSpec) -> ModelParams:
    """Load and validate a weight file against the expected architecture."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise FormatError(
            f"{path}: bad magic {raw[:4]!r}, expected {MAGIC!r}", offset=0
        )
    if len(raw) < 12:
        raise FormatError(f"{path}: truncated header", offset=len(raw))
    version, count = struct.unpack("<II", raw[4:12])
    if version != WEIGHT_FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {version}", offset=4)
    expected = param_shapes(spec)
    if count != len(expected):
        raise FormatError(
            f"{path}: file holds {count} tensors, architecture needs {len(expected)}", offset=8
        )
    off = 12
    weights: list[np.ndarray] = []
    for t, want in enumerate(expected):
        if len(raw) < off + 4:
            raise FormatError(f"{path}: truncated at tensor {t} rank", offset=off)
        (rank,) = struct.unpack("<I", raw[off : off + 4])
        off += 4
        if rank != len(want):
            raise FormatError(f"{path}: tensor {t} rank {rank}, expected {len(want)}", offset=off - 4)
        if len(raw) < off + 4 * rank:
            raise FormatError(f"{path}: truncated at tensor {t} dims", offset=off)
        dims = struct.unpack(f"<{rank}I", raw[off : off + 4 * rank])
        off += 4 * rank
        if tuple(dims) != want:
            raise FormatError(f"{path}: tensor {t} shape {dims}, expected {want}", offset=off - 4 * rank)
        size = int(np.prod(dims)) * 4
        if len(raw) < off + size:
            raise FormatError(f"{path}: truncated at tensor {t} data", offset=off)
        w = np.frombuffer(raw[off : off + size], dtype="<f4").reshape(dims).copy()
        off += size
        if not np.all(np.isfinite(w)):
            raise FormatError(f"{path}: tensor {t} contains non-finite values", offset=off - size)
        weights.append(w)
    if off != len(raw):
        raise FormatError(f"{path}: {len(raw) - off} trailing bytes", offset=off)
    return ModelParams(spec, weights, version)
