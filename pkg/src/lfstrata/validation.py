"""Input-validation helpers shared by every module.

Rasters are plain numpy arrays with fixed conventions:

* image: ``(H, W, C)`` float64, C in {1, 3}, values nominally in [0, 1]
  (intermediate pipeline values may leave the range; clamping happens at
  export only)
* disparity / confidence map: ``(H, W)`` float64
* mask: ``(H, W)`` bool, True = valid/known
* label map: ``(H, W)`` integer, 0 = ambiguous, 1..L = layer labels

The ``as_*`` helpers coerce compatible inputs to those conventions and raise
package errors otherwise, mirroring scikit-learn's ``check_array`` style.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError

__all__ = [
    "as_image",
    "as_map",
    "as_mask",
    "as_labels",
    "check_same_shape",
]


def as_image(arr, name: str = "image") -> np.ndarray:
    """Coerce to an (H, W, C) float64 image with C in {1, 3}.

    A 2-D array is promoted to a single-channel image.
    """
    out = np.asarray(arr, dtype=np.float64)
    if out.ndim == 2:
        out = out[:, :, None]
    if out.ndim != 3 or out.shape[2] not in (1, 3):
        raise ValueError(f"{name}: expected (H, W) or (H, W, 1|3) array, got shape {np.shape(arr)}")
    if out.shape[0] < 1 or out.shape[1] < 1:
        raise ValueError(f"{name}: empty image {out.shape}")
    return out


def as_map(arr, name: str = "map") -> np.ndarray:
    """Coerce to an (H, W) float64 scalar map."""
    out = np.asarray(arr, dtype=np.float64)
    if out.ndim == 3 and out.shape[2] == 1:
        out = out[:, :, 0]
    if out.ndim != 2:
        raise ValueError(f"{name}: expected (H, W) array, got shape {np.shape(arr)}")
    return out


def as_mask(arr, name: str = "mask") -> np.ndarray:
    """Coerce to an (H, W) boolean mask."""
    out = np.asarray(arr)
    if out.ndim != 2:
        raise ValueError(f"{name}: expected (H, W) array, got shape {np.shape(arr)}")
    return out.astype(bool, copy=False)


def as_labels(arr, name: str = "labels") -> np.ndarray:
    """Coerce to an (H, W) non-negative integer label map."""
    out = np.asarray(arr)
    if out.ndim != 2:
        raise ValueError(f"{name}: expected (H, W) array, got shape {np.shape(arr)}")
    if not np.issubdtype(out.dtype, np.integer):
        cast = out.astype(np.int64)
        if not np.array_equal(cast, out):
            raise ValueError(f"{name}: labels must be integers")
        out = cast
    if out.min(initial=0) < 0:
        raise ValueError(f"{name}: labels must be non-negative")
    return out.astype(np.int64, copy=False)


def check_same_shape(*named_arrays) -> None:
    """Raise DimensionMismatchError unless all (name, array) pairs share HxW."""
    shapes = [(name, np.asarray(a).shape[:2]) for name, a in named_arrays]
    first_name, first = shapes[0]
    for name, shape in shapes[1:]:
        if shape != first:
            raise DimensionMismatchError(
                f"{name} has spatial shape {shape}, expected {first} to match {first_name}"
            )
