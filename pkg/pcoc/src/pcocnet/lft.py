"""Readers for the renderer's file interfaces: LFT1 tensors, manifests, PNGs.

LFT1 container: magic ``LFT1``, little-endian u32 rank, u32 dims
(height, width, channels), float32 row-major channel-last payload.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
from PIL import Image


class CorruptHeaderError(ValueError):
    """Tensor file header malformed or inconsistent with the payload."""


MAGIC = b"LFT1"


def read_tensor(path) -> np.ndarray:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise CorruptHeaderError(f"{path}: bad magic")
    (ndim,) = struct.unpack_from("<I", raw, 4)
    if not 1 <= ndim <= 8:
        raise CorruptHeaderError(f"{path}: implausible rank {ndim}")
    header_end = 8 + 4 * ndim
    if len(raw) < header_end:
        raise CorruptHeaderError(f"{path}: truncated header")
    dims = struct.unpack_from(f"<{ndim}I", raw, 8)
    count = int(np.prod(dims, dtype=np.int64))
    if len(raw) - header_end != count * 4:
        raise CorruptHeaderError(f"{path}: payload does not match dims {dims}")
    return np.frombuffer(raw[header_end:], dtype="<f4").reshape(dims).copy()


def write_tensor(tensor, path) -> None:
    arr = np.ascontiguousarray(tensor, dtype=np.float32)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        fh.write(arr.astype("<f4").tobytes())


def read_manifest(path) -> list:
    path = Path(path)
    doc = json.loads(path.read_text())
    if not isinstance(doc, list):
        raise ValueError(f"{path}: manifest must be a JSON list")
    return doc


def resolve_path(entry_path, manifest_path) -> Path:
    """Manifest-relative resolution for non-absolute entries."""
    p = Path(entry_path)
    return p if p.is_absolute() else Path(manifest_path).parent / p


def load_png(path) -> np.ndarray:
    """PNG as (H, W, 3) float32 in [0, 1]."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"), dtype=np.float32) / 255.0
    return arr


def save_png(image, path) -> None:
    arr = np.clip(np.asarray(image, dtype=np.float32), 0.0, 1.0)
    data = np.rint(arr * 255.0).astype(np.uint8)
    Image.fromarray(data, mode="RGB").save(path, format="PNG")
