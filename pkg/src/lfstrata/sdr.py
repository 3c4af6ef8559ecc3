"""Stratified disparity rendering.

The renderer splits the disparity range of a view into L equal intervals,
warps the pixels of each interval independently (scatter form, so unreached
target pixels stay empty), then fuses the warped layers nearest-surface
first: layer 1 holds the highest disparities (closest to camera) and wins
every per-pixel conflict, layer L the lowest (furthest away). Applying the
same operator to a disparity map as payload renders the target view's own
disparity, whose quantization gives the per-pixel surface labels used for
occlusion completion downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidLayerCountError,
    LayerOutOfRangeError,
)
from .validation import as_image, as_map, as_mask, check_same_shape
from .warp import WarpResult, forward_splat

__all__ = [
    "DEFAULT_LAYER_COUNT",
    "Stratification",
    "stratify",
    "warp_layer",
    "fuse",
    "sdr_render",
    "average_predictions",
    "render_target_disparity",
    "quantize_labels",
]

# Library-wide default number of stratification layers; fine enough that the
# within-layer disparity spread stays below sub-pixel error at 10x shifts on
# desk-scale scenes, and configurable everywhere it matters.
DEFAULT_LAYER_COUNT = 16


@dataclass(frozen=True)
class Stratification:
    """Partition of a disparity map into L equal-width intervals.

    ``layer_index`` maps each pixel to its layer in {1..L}; layer 1 covers
    the top of the disparity range (nearest surfaces), layer L the bottom.
    ``layer_masks[l-1]`` selects the member pixels of layer l and
    ``layered_disparity[l-1]`` carries the original disparity there and 0
    elsewhere. The masks partition the pixel grid.
    """

    layer_count: int
    d_min: float
    d_max: float
    layer_index: np.ndarray
    layer_masks: np.ndarray          # (L, H, W) bool
    layered_disparity: np.ndarray    # (L, H, W) float

    def mask(self, layer: int) -> np.ndarray:
        self._check_layer(layer)
        return self.layer_masks[layer - 1]

    def disparity(self, layer: int) -> np.ndarray:
        self._check_layer(layer)
        return self.layered_disparity[layer - 1]

    def _check_layer(self, layer: int) -> None:
        if not 1 <= layer <= self.layer_count:
            raise LayerOutOfRangeError(f"layer {layer} outside 1..{self.layer_count}")


def _interval_labels(values: np.ndarray, d_min: float, d_max: float, layer_count: int) -> np.ndarray:
    """Map values to interval labels: d_max -> 1 (near), d_min -> L (far)."""
    if d_max == d_min:
        return np.ones(values.shape, dtype=np.int64)
    width = (d_max - d_min) / layer_count
    raw = layer_count - np.floor((values - d_min) / width).astype(np.int64)
    return np.clip(raw, 1, layer_count)


def stratify(disparity, layer_count: int) -> Stratification:
    """Split a disparity map into L equal intervals over its own value range.

    A pixel with disparity d gets layer ``clamp(L - floor((d - d_min)/w), 1, L)``
    with ``w = (d_max - d_min)/L``, so the maximum maps to layer 1 and the
    minimum to layer L. A constant map degenerates to a single occupied
    layer 1.
    """
    disp = as_map(disparity, "disparity")
    if layer_count < 1:
        raise InvalidLayerCountError(f"layer count must be >= 1, got {layer_count}")
    if not np.all(np.isfinite(disp)):
        raise ValueError("disparity must be finite")

    d_min = float(disp.min())
    d_max = float(disp.max())
    index = _interval_labels(disp, d_min, d_max, layer_count)

    masks = np.zeros((layer_count,) + disp.shape, dtype=bool)
    for l in range(1, layer_count + 1):
        masks[l - 1] = index == l
    layered = np.where(masks, disp[None, :, :], 0.0)
    return Stratification(
        layer_count=layer_count,
        d_min=d_min,
        d_max=d_max,
        layer_index=index,
        layer_masks=masks,
        layered_disparity=layered,
    )


def warp_layer(image, strat: Stratification, layer: int, shift: float) -> WarpResult:
    """Scatter-warp the pixels of one stratification layer.

    Equivalent to a full forward splat restricted to the layer's member
    mask; everything outside the layer's contributions stays zero.
    """
    img = as_image(image)
    mask = strat.mask(layer)
    check_same_shape(("image", img), ("layer mask", mask))
    return forward_splat(img, strat.disparity(layer), shift, valid=mask)


def fuse(layers) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Compose warped layers nearest-first into one image.

    Per pixel the smallest contributing layer index (nearest surface) wins.
    Returns ``(image, mask, selection)`` where ``selection`` is the
    (H, W, L) one-hot tensor recording which layer supplied each pixel; a
    pixel with no contributions is ambiguous (zero value, mask False, all
    selection entries False).
    """
    layers = list(layers)
    if not layers:
        raise EmptyInputError("fuse needs at least one layer")
    shape = layers[0].image.shape
    for lr in layers[1:]:
        if lr.image.shape != shape:
            raise DimensionMismatchError("all layers must share dimensions")

    h, w, c = shape
    L = len(layers)
    out = np.zeros((h, w, c), dtype=np.float64)
    out_mask = np.zeros((h, w), dtype=bool)
    selection = np.zeros((h, w, L), dtype=bool)

    # Nearest layer (smallest l) claims each pixel; later layers only fill
    # what is still empty.
    for li, lr in enumerate(layers):
        take = lr.mask & ~out_mask
        out[take] = lr.image[take]
        selection[take, li] = True
        out_mask |= take
    return out, out_mask, selection


def sdr_render(image, disparity, shift: float, layer_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Render a shifted view of ``image``: stratify, warp each layer, fuse.

    Returns ``(image, mask)``; masked-off pixels are occlusion gaps with
    value 0. ``shift = 0`` reproduces the input exactly.
    """
    img = as_image(image)
    disp = as_map(disparity, "disparity")
    check_same_shape(("image", img), ("disparity", disp))
    strat = stratify(disp, layer_count)
    warped = [warp_layer(img, strat, l, shift) for l in range(1, layer_count + 1)]
    out, mask, _ = fuse(warped)
    return out, mask


def average_predictions(predictions, mode: str = "masked") -> tuple[np.ndarray, np.ndarray]:
    """Combine per-reference renderings of the same target view.

    ``mode="paper"`` divides the plain sum by the number of predictions,
    letting ambiguous pixels contribute their zero value; ``mode="masked"``
    (default) averages only the contributing views per pixel. The output
    mask is the union of input masks either way.
    """
    preds = list(predictions)
    if not preds:
        raise EmptyInputError("average_predictions needs at least one prediction")
    imgs = [as_image(p[0]) for p in preds]
    masks = [as_mask(p[1]) for p in preds]
    shape = imgs[0].shape
    for im, mk in zip(imgs[1:], masks[1:]):
        if im.shape != shape:
            raise DimensionMismatchError("predictions must share dimensions")
    for im, mk in zip(imgs, masks):
        check_same_shape(("image", im), ("mask", mk))

    union = np.logical_or.reduce(masks)
    stack = np.stack(imgs)              # (N, H, W, C)
    mask_stack = np.stack(masks)        # (N, H, W)

    if mode == "paper":
        out = stack.sum(axis=0) / len(preds)
        out[~union] = 0.0
    elif mode == "masked":
        counts = mask_stack.sum(axis=0)
        total = (stack * mask_stack[:, :, :, None]).sum(axis=0)
        out = np.zeros_like(total)
        contributing = counts > 0
        out[contributing] = total[contributing] / counts[contributing][:, None]
    else:
        raise ValueError(f"unknown averaging mode {mode!r} (use 'paper' or 'masked')")
    return out, union


def render_target_disparity(disparity0, t: float, layer_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Render the target view's disparity map by warping disparity with itself.

    The disparity map serves as both payload and geometry, exactly like an
    RGB rendering. Returns ``(disparity, mask)``.
    """
    disp = as_map(disparity0, "disparity")
    out, mask = sdr_render(disp[:, :, None], disp, t, layer_count)
    return out[:, :, 0], mask


def quantize_labels(disparity, mask, layer_count: int) -> np.ndarray:
    """Quantize a rendered disparity map into L discrete labels.

    Uses the same equal-interval rule as :func:`stratify` over the range of
    the valid pixels: label 1 = nearest interval, label L = furthest.
    Ambiguous (masked-off) pixels get the reserved label 0.
    """
    disp = as_map(disparity, "disparity")
    m = as_mask(mask)
    check_same_shape(("disparity", disp), ("mask", m))
    labels = np.zeros(disp.shape, dtype=np.int64)
    if not m.any():
        return labels
    valid_values = disp[m]
    d_min = float(valid_values.min())
    d_max = float(valid_values.max())
    labels[m] = _interval_labels(disp[m], d_min, d_max, layer_count)
    return labels
