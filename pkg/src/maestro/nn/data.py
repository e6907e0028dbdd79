"""Datasets: synthetic Gaussian-blob generator and IDX file IO.

Images are float32 rows in [0, 1], one flattened image per row; labels are
int64 class indices. IDX files follow the standard big-endian layout
(magic 0x00000803 for images, 0x00000801 for labels).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from maestro.errors import FormatError, InputError
from maestro.rng import Rng, derive_seed

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
_MAX_IDX_DIM = 1 << 24  # guards against dimension overflow on corrupt headers


@dataclass
class Dataset:
    images: np.ndarray  # (n, h*w*c) float32 in [0, 1]
    labels: np.ndarray  # (n,) int64 in [0, num_classes)
    dims: tuple[int, int, int]
    num_classes: int

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float32)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.images) != len(self.labels):
            raise InputError(
                f"image count {len(self.images)} != label count {len(self.labels)}"
            )
        h, w, c = self.dims
        if self.images.ndim != 2 or self.images.shape[1] != h * w * c:
            raise InputError(f"images must be (n, {h * w * c}), got {self.images.shape}")
        if len(self.images) and (self.images.min() < 0.0 or self.images.max() > 1.0):
            raise InputError("pixel values must lie in [0, 1]")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise InputError(f"labels must lie in [0, {self.num_classes})")

    def __len__(self) -> int:
        return len(self.images)

    def subset(self, count: int) -> "Dataset":
        return Dataset(self.images[:count], self.labels[:count], self.dims, self.num_classes)


def gen_synthetic(
    seed: int,
    n: int,
    num_classes: int,
    dims: tuple[int, int, int],
    noise_scale: float = 0.12,
) -> Dataset:
    """Gaussian blobs around per-class uniform template images, clipped to [0, 1].

    Fully reproducible from the arguments: templates and noise come from
    splitmix64 streams derived from the seed. Labels cycle round-robin so
    classes stay balanced.
    """
    if n < 1 or num_classes < 2:
        raise InputError("need n >= 1 and num_classes >= 2")
    h, w, c = dims
    d = h * w * c
    templates = Rng(derive_seed(seed, "templates")).uniform(num_classes * d).reshape(num_classes, d)
    noise = Rng(derive_seed(seed, "noise")).normal(n * d).reshape(n, d) * noise_scale
    labels = np.arange(n, dtype=np.int64) % num_classes
    images = np.clip(templates[labels] + noise, 0.0, 1.0).astype(np.float32)
    return Dataset(images, labels, (h, w, c), num_classes)


def _read_idx_header(raw: bytes, path: str, expected_magic: int):
    if len(raw) < 4:
        raise FormatError(f"{path}: truncated IDX header", offset=len(raw))
    (magic,) = struct.unpack(">I", raw[:4])
    if magic != expected_magic:
        raise FormatError(
            f"{path}: bad IDX magic 0x{magic:08X}, expected 0x{expected_magic:08X}", offset=0
        )
    ndim = magic & 0xFF
    header_len = 4 + 4 * ndim
    if len(raw) < header_len:
        raise FormatError(f"{path}: truncated IDX dimension table", offset=len(raw))
    dims = struct.unpack(f">{ndim}I", raw[4:header_len])
    for i, dim in enumerate(dims):
        if dim > _MAX_IDX_DIM:
            raise FormatError(f"{path}: IDX dimension {i} overflows ({dim})", offset=4 + 4 * i)
    return dims, header_len


def load_idx(images_path: str, labels_path: str, num_classes: int | None = None) -> Dataset:
    """Parse an images/labels IDX pair; pixels are scaled by 1/255."""
    with open(images_path, "rb") as fh:
        raw = fh.read()
    dims, off = _read_idx_header(raw, str(images_path), IDX_IMAGES_MAGIC)
    n, h, w = dims
    body = raw[off:]
    if len(body) != n * h * w:
        raise FormatError(
            f"{images_path}: expected {n * h * w} pixel bytes, found {len(body)}", offset=off
        )
    images = np.frombuffer(body, dtype=np.uint8).astype(np.float32).reshape(n, h * w) / 255.0

    with open(labels_path, "rb") as fh:
        raw = fh.read()
    (count,), off = _read_idx_header(raw, str(labels_path), IDX_LABELS_MAGIC)
    body = raw[off:]
    if len(body) != count:
        raise FormatError(f"{labels_path}: expected {count} label bytes, found {len(body)}", offset=off)
    labels = np.frombuffer(body, dtype=np.uint8).astype(np.int64)
    if count != n:
        raise InputError(f"image count {n} != label count {count}")
    classes = num_classes if num_classes is not None else int(labels.max()) + 1 if count else 2
    return Dataset(images, labels, (h, w, 1), classes)


def save_idx(data: Dataset, images_path: str, labels_path: str) -> None:
    """Write the dataset as an IDX pair, quantizing pixels to uint8."""
    h, w, c = data.dims
    if c != 1:
        raise InputError("IDX image files are single-channel")
    n = len(data)
    pixels = np.clip(np.rint(data.images * 255.0), 0, 255).astype(np.uint8)
    with open(images_path, "wb") as fh:
        fh.write(struct.pack(">IIII", IDX_IMAGES_MAGIC, n, h, w))
        fh.write(pixels.tobytes())
    with open(labels_path, "wb") as fh:
        fh.write(struct.pack(">II", IDX_LABELS_MAGIC, n))
        fh.write(data.labels.astype(np.uint8).tobytes())
