"""Sub-pixel resampling along the horizontal axis.

Two realizations of the disparity-driven warp are provided:

* :func:`backward_warp` gathers: each target pixel samples the source image
  at ``x + shift * D(x, y)`` with a 4-tap cubic kernel.
* :func:`forward_splat` scatters: each valid source pixel deposits its value
  at ``x + shift * D(x, y)`` through the same 4-tap footprint, accumulating
  kernel weights; target pixels whose accumulated weight stays below
  ``EPSILON_WEIGHT`` remain empty (value 0, mask False).

The angular domain is horizontal, so only x moves; the kernel is the Keys
cubic with a = -0.5 (exact for linear signals, weights sum to 1).
Intermediate values are not clamped to [0, 1]: the negative kernel lobes may
overshoot slightly, and downstream feature subtraction relies on linearity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import as_image, as_map, as_mask, check_same_shape

__all__ = ["EPSILON_WEIGHT", "WarpResult", "bicubic_weights", "backward_warp", "forward_splat"]

# Accumulated splat weight below this counts as "unreached" (occlusion gap)
# rather than real coverage from a kernel tail.
EPSILON_WEIGHT = 1e-6


def bicubic_weights(frac):
    """Keys cubic (a = -0.5) tap weights for a sample at offset ``frac`` in [0, 1).

    Returns the four weights for taps at integer offsets {-1, 0, 1, 2}
    relative to ``floor`` of the sample position, shaped (4,) for a scalar
    input or (4, N) for an array. The weights always sum to 1; ``frac == 0``
    yields (0, 1, 0, 0).
    """
    f = np.asarray(frac, dtype=np.float64)
    f2 = f * f
    f3 = f2 * f
    w = np.stack([
        0.5 * (-f3 + 2.0 * f2 - f),
        0.5 * (3.0 * f3 - 5.0 * f2 + 2.0),
        0.5 * (-3.0 * f3 + 4.0 * f2 + f),
        0.5 * (f3 - f2),
    ])
    return w


@dataclass(frozen=True)
class WarpResult:
    """Warped image plus validity mask (and accumulation weights in scatter mode).

    ``mask[p] == False`` means pixel p received no contribution and carries
    the value 0.
    """

    image: np.ndarray
    mask: np.ndarray
    weight: np.ndarray | None = None

    @property
    def shape(self):
        return self.image.shape


def backward_warp(image, disparity, shift: float) -> WarpResult:
    """Gather-warp: output(x, y) = cubic sample of ``image`` at (x + shift*D(x, y), y).

    A target pixel is valid only if every nonzero-weight tap of its 4-tap
    horizontal support lies inside the image; on-grid samples need just
    their single tap in bounds.
    """
    img = as_image(image)
    disp = as_map(disparity, "disparity")
    check_same_shape(("image", img), ("disparity", disp))
    h, w, c = img.shape

    xs = np.arange(w, dtype=np.float64)[None, :] + shift * disp
    base = np.floor(xs).astype(np.int64)
    frac = xs - base
    on_grid = frac == 0.0

    valid = np.where(
        on_grid,
        (base >= 0) & (base <= w - 1),
        (base - 1 >= 0) & (base + 2 <= w - 1),
    )

    weights = bicubic_weights(frac)  # (4, H, W)
    out = np.zeros((h, w, c), dtype=np.float64)
    rows = np.arange(h)[:, None]
    for k in range(4):
        cols = np.clip(base + (k - 1), 0, w - 1)
        out += weights[k][:, :, None] * img[rows, cols, :]
    out[~valid] = 0.0
    return WarpResult(image=out, mask=valid)


def forward_splat(image, disparity, shift: float, valid=None) -> WarpResult:
    """Scatter-warp: each valid source pixel splats to ``x + shift*D(x, y)``.

    Values and kernel weights accumulate at the 4 horizontal taps of each
    target abscissa; the result is the weight-normalized accumulation where
    the total weight exceeds ``EPSILON_WEIGHT`` and an empty (zero, masked
    False) pixel elsewhere. Target pixels never reached stay empty, which is
    what marks occlusion gaps. Because the negative kernel lobes can cancel,
    coverage under this threshold rule is guaranteed monotone in ``valid``
    only when splats land on-grid (integer shift*disparity).
    """
    img = as_image(image)
    disp = as_map(disparity, "disparity")
    if valid is None:
        valid_mask = np.ones(disp.shape, dtype=bool)
    else:
        valid_mask = as_mask(valid, "valid")
    check_same_shape(("image", img), ("disparity", disp), ("valid", valid_mask))
    h, w, c = img.shape

    acc = np.zeros((h, w, c), dtype=np.float64)
    wacc = np.zeros((h, w), dtype=np.float64)

    ys, xs = np.nonzero(valid_mask)
    if ys.size:
        tx = xs + shift * disp[ys, xs]
        base = np.floor(tx).astype(np.int64)
        frac = tx - base
        weights = bicubic_weights(frac)  # (4, N)
        values = img[ys, xs, :]  # (N, C)
        for k in range(4):
            cols = base + (k - 1)
            inb = (cols >= 0) & (cols <= w - 1)
            if not inb.any():
                continue
            wk = weights[k][inb]
            np.add.at(wacc, (ys[inb], cols[inb]), wk)
            np.add.at(acc, (ys[inb], cols[inb]), values[inb] * wk[:, None])

    mask = wacc > EPSILON_WEIGHT
    out = np.zeros_like(acc)
    if mask.any():
        out[mask] = acc[mask] / wacc[mask][:, None]
    return WarpResult(image=out, mask=mask, weight=wacc)
