"""Conditioning features for the learned corrector, plus tensor serialization.

The 7-channel conditioning stack concatenates the two granularity
difference images (each superpixel-granular rendering minus the
multi-reference rendering, with occlusion gaps entering as literal zeros)
and the filled label map normalized to [-0.5, 0.5]. Gaps present in all
three renderings are recorded in an explicit side mask so consumers need
not re-derive them.

Tensor files use the "LFT1" container: magic ``LFT1``, little-endian u32
rank, u32 dims (height, width, channels), float32 row-major channel-last
payload. A JSON manifest lists the samples of an exported dataset.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CorruptHeaderError,
    NonFiniteValuesError,
    PatchTooLargeError,
    UnfilledLabelsError,
)
from .validation import as_image, as_labels, as_mask, check_same_shape

__all__ = [
    "FeatureTensor",
    "assemble",
    "extract_patches",
    "write_tensor",
    "read_tensor",
    "write_manifest",
    "read_manifest",
]

MAGIC = b"LFT1"


def _as_rgb(image: np.ndarray) -> np.ndarray:
    """Replicate single-channel payloads so the channel layout stays fixed."""
    img = as_image(image)
    if img.shape[2] == 1:
        img = np.repeat(img, 3, axis=2)
    return img


@dataclass(frozen=True)
class FeatureTensor:
    """(H, W, 7) conditioning stack.

    Channels 0-2: fine-granularity difference; 3-5: coarse-granularity
    difference; 6: normalized filled label map. ``gap_mask`` marks pixels
    ambiguous in every input rendering (the true completion targets);
    ``base`` keeps the multi-reference rendering the differences were taken
    against, needed to restore absolute color from a predicted residual.
    """

    data: np.ndarray
    gap_mask: np.ndarray
    base: np.ndarray
    layer_count: int

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]


def assemble(vd, vsp1, vsp2, filled_labels, layer_count: int) -> FeatureTensor:
    """Build the conditioning tensor from renderings and the filled label map.

    ``vd``, ``vsp1``, ``vsp2`` are (image, mask) pairs whose images carry 0
    at masked-off pixels; the subtraction keeps that convention rather than
    excluding gaps. ``filled_labels`` must contain no zeros.
    """
    vd_img, vd_mask = _as_rgb(vd[0]), as_mask(vd[1])
    sp1_img, sp1_mask = _as_rgb(vsp1[0]), as_mask(vsp1[1])
    sp2_img, sp2_mask = _as_rgb(vsp2[0]), as_mask(vsp2[1])
    labels = as_labels(filled_labels)
    check_same_shape(
        ("vd", vd_img), ("vd mask", vd_mask),
        ("vsp1", sp1_img), ("vsp1 mask", sp1_mask),
        ("vsp2", sp2_img), ("vsp2 mask", sp2_mask),
        ("labels", labels),
    )
    if (labels == 0).any():
        raise UnfilledLabelsError("filled label map still contains ambiguous (zero) labels")
    if labels.max() > layer_count:
        raise ValueError(f"labels exceed layer count {layer_count}")

    # Gaps are literal zeros on both sides of the subtraction.
    vd_z = np.where(vd_mask[:, :, None], vd_img, 0.0)
    sp1_z = np.where(sp1_mask[:, :, None], sp1_img, 0.0)
    sp2_z = np.where(sp2_mask[:, :, None], sp2_img, 0.0)

    t1 = sp1_z - vd_z
    t2 = sp2_z - vd_z
    t3 = labels.astype(np.float64) / layer_count - 0.5

    data = np.concatenate([t1, t2, t3[:, :, None]], axis=2)
    gap_mask = ~vd_mask & ~sp1_mask & ~sp2_mask
    return FeatureTensor(data=data, gap_mask=gap_mask, base=vd_z, layer_count=layer_count)


def extract_patches(tensor: FeatureTensor, target_gt, size: int = 128, stride: int = 64):
    """Crop aligned (feature, ground-truth, base) patches on a stride grid.

    Patch origins run 0, stride, 2*stride, ... while the patch fits; crops
    are views-copied bit-exactly from the sources.
    """
    gt = _as_rgb(target_gt)
    check_same_shape(("tensor", tensor.data), ("ground truth", gt))
    h, w = tensor.data.shape[:2]
    if size > min(h, w):
        raise PatchTooLargeError(f"patch size {size} exceeds tensor extent {h}x{w}")
    if stride < 1:
        raise ValueError("stride must be >= 1")

    patches = []
    for y0 in range(0, h - size + 1, stride):
        for x0 in range(0, w - size + 1, stride):
            patches.append((
                tensor.data[y0:y0 + size, x0:x0 + size].copy(),
                gt[y0:y0 + size, x0:x0 + size].copy(),
                tensor.base[y0:y0 + size, x0:x0 + size].copy(),
            ))
    return patches


# ---------------------------------------------------------------------------
# LFT1 container

def write_tensor(tensor, path) -> None:
    """Write an array as an LFT1 file (float32, little-endian, row-major)."""
    arr = np.ascontiguousarray(tensor, dtype=np.float32)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValuesError("refusing to serialize non-finite tensor values")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        fh.write(arr.astype("<f4").tobytes())


def read_tensor(path) -> np.ndarray:
    """Read an LFT1 file back into a float32 array; round-trips bit-exactly."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise CorruptHeaderError(f"{path}: bad magic (expected {MAGIC!r})")
    (ndim,) = struct.unpack_from("<I", raw, 4)
    if not 1 <= ndim <= 8:
        raise CorruptHeaderError(f"{path}: implausible rank {ndim}")
    header_end = 8 + 4 * ndim
    if len(raw) < header_end:
        raise CorruptHeaderError(f"{path}: truncated header")
    dims = struct.unpack_from(f"<{ndim}I", raw, 8)
    count = int(np.prod(dims, dtype=np.int64))
    if len(raw) - header_end != count * 4:
        raise CorruptHeaderError(
            f"{path}: payload length {len(raw) - header_end} does not match dims {dims}"
        )
    return np.frombuffer(raw[header_end:], dtype="<f4").reshape(dims).copy()


# ---------------------------------------------------------------------------
# Dataset manifest

def write_manifest(entries, path) -> None:
    """Write the sample manifest: a JSON list of dicts with stable key order."""
    doc = [dict(sorted(e.items())) for e in entries]
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_manifest(path) -> list:
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, list):
        raise CorruptHeaderError(f"{path}: manifest must be a JSON list")
    return doc
