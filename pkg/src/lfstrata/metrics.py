"""Image quality metrics: PSNR and single-scale SSIM.

Both assume intensities in [0, 1] (peak value 1). SSIM uses the reference
constants: 11x11 Gaussian window with sigma 1.5, C1 = 0.01^2, C2 = 0.03^2,
statistics over fully interior window positions only, grayscale conversion
by channel mean.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, EmptyMaskError, ImageSmallerThanWindowError
from .validation import as_image, as_mask, check_same_shape

__all__ = ["psnr", "ssim", "PSNR_CAP_DB"]

PSNR_CAP_DB = 99.0

_WINDOW = 11
_SIGMA = 1.5
_C1 = 0.01 ** 2
_C2 = 0.03 ** 2


def psnr(a, b, mask=None) -> float:
    """Peak signal-to-noise ratio in dB, optionally over masked pixels only.

    Returns the capped sentinel 99.0 for a zero (or vanishing) MSE.
    """
    ia = as_image(a, "a")
    ib = as_image(b, "b")
    if ia.shape != ib.shape:
        raise DimensionMismatchError(f"image shapes differ: {ia.shape} vs {ib.shape}")
    diff = ia - ib
    if mask is not None:
        m = as_mask(mask)
        check_same_shape(("a", ia), ("mask", m))
        if not m.any():
            raise EmptyMaskError("mask selects no pixels")
        diff = diff[m]
    mse = float(np.mean(diff ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(10.0 * np.log10(1.0 / mse), PSNR_CAP_DB)


def _to_gray(img: np.ndarray) -> np.ndarray:
    return img[:, :, 0] if img.shape[2] == 1 else img.mean(axis=2)


def _gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords ** 2) / (2.0 * sigma ** 2))
    k = np.outer(g, g)
    return k / k.sum()


def ssim(a, b) -> float:
    """Mean structural similarity over all interior 11x11 window positions."""
    ia = as_image(a, "a")
    ib = as_image(b, "b")
    if ia.shape != ib.shape:
        raise DimensionMismatchError(f"image shapes differ: {ia.shape} vs {ib.shape}")
    ga = _to_gray(ia)
    gb = _to_gray(ib)
    h, w = ga.shape
    if h < _WINDOW or w < _WINDOW:
        raise ImageSmallerThanWindowError(f"image {h}x{w} smaller than {_WINDOW}x{_WINDOW} window")

    kernel = _gaussian_kernel(_WINDOW, _SIGMA)
    win_a = np.lib.stride_tricks.sliding_window_view(ga, (_WINDOW, _WINDOW))
    win_b = np.lib.stride_tricks.sliding_window_view(gb, (_WINDOW, _WINDOW))

    mu_a = np.tensordot(win_a, kernel, axes=([2, 3], [0, 1]))
    mu_b = np.tensordot(win_b, kernel, axes=([2, 3], [0, 1]))
    e_aa = np.tensordot(win_a * win_a, kernel, axes=([2, 3], [0, 1]))
    e_bb = np.tensordot(win_b * win_b, kernel, axes=([2, 3], [0, 1]))
    e_ab = np.tensordot(win_a * win_b, kernel, axes=([2, 3], [0, 1]))

    var_a = e_aa - mu_a ** 2
    var_b = e_bb - mu_b ** 2
    cov = e_ab - mu_a * mu_b

    num = (2.0 * mu_a * mu_b + _C1) * (2.0 * cov + _C2)
    den = (mu_a ** 2 + mu_b ** 2 + _C1) * (var_a + var_b + _C2)
    return float(np.mean(num / den))
