"""Surface-consistent completion of label maps and images.

Ambiguous regions exposed by a large viewpoint shift belong, with high
probability, to the most distant surface bordering them: occluders move
away and reveal what was behind them. :func:`dilate_fill` encodes that rule
as an iterated morphological dilation that propagates the largest (most
distant) label in a local window into zero-marked pixels. With the filled
label map as guide, :func:`surface_fill_rgb` completes an image by copying
each missing pixel from the nearest known pixel of the same surface,
never pulling colors across an occluding contour.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage
from scipy.spatial.distance import cdist

from .errors import NoKnownLabelsError, NoValidPixelsError, UnfilledLabelsError
from .validation import as_image, as_labels, as_mask, check_same_shape

__all__ = ["dilate_fill", "surface_fill_rgb"]


def dilate_fill(labels, window: int = 3, max_iters: int | None = None):
    """Propagate the largest label in each window into ambiguous (zero) pixels.

    Simultaneous (Jacobi) updates per iteration: every zero pixel with at
    least one non-zero label inside its window x window neighborhood takes
    the maximum such label; known pixels never change. Iterates until no
    zeros remain or ``max_iters`` (default H+W) is hit.

    Returns ``(filled, converged)`` where ``converged`` is False only if
    zeros survived the iteration budget.
    """
    lab = as_labels(labels)
    if window < 3 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 3, got {window}")
    if not (lab > 0).any():
        raise NoKnownLabelsError("label map contains no known (non-zero) labels")
    if max_iters is None:
        max_iters = lab.shape[0] + lab.shape[1]

    out = lab.copy()
    for _ in range(max_iters):
        zeros = out == 0
        if not zeros.any():
            return out, True
        neighborhood_max = ndimage.maximum_filter(out, size=window, mode="constant", cval=0)
        fill = zeros & (neighborhood_max > 0)
        out[fill] = neighborhood_max[fill]
    return out, not (out == 0).any()


def _nearest_valid(py, px, candidates):
    """Index of the candidate nearest to each (py, px); ties go to scanline order."""
    # Candidates arrive in scanline (row-major) order and argmin returns the
    # first minimum, which implements the tie rule.
    targets = np.stack([py, px], axis=1).astype(np.float64)
    nearest = np.empty(len(py), dtype=np.int64)
    chunk = 1024
    for s in range(0, len(py), chunk):
        d = cdist(targets[s:s + chunk], candidates, metric="sqeuclidean")
        nearest[s:s + chunk] = np.argmin(d, axis=1)
    return nearest


def surface_fill_rgb(image, mask, labels) -> np.ndarray:
    """Fill masked-off pixels from the nearest valid pixel on the same surface.

    ``labels`` must be fully filled (no zeros). Each invalid pixel copies
    the nearest (Euclidean, scanline tie-break) valid pixel sharing its
    label; if its label has no valid pixel anywhere, the nearest valid
    pixel among strictly larger (more distant) labels is used, and failing
    that the nearest valid pixel of any label.
    """
    img = as_image(image)
    m = as_mask(mask)
    lab = as_labels(labels)
    check_same_shape(("image", img), ("mask", m), ("labels", lab))
    if (lab == 0).any():
        raise UnfilledLabelsError("labels must be fully filled before surface-consistent fill")
    if not m.any():
        raise NoValidPixelsError("mask marks no valid pixels to fill from")

    out = img.copy()
    if m.all():
        return out

    invalid_y, invalid_x = np.nonzero(~m)
    gap_labels = lab[invalid_y, invalid_x]
    for value in np.unique(gap_labels):
        sel = gap_labels == value
        py, px = invalid_y[sel], invalid_x[sel]

        same = m & (lab == value)
        if same.any():
            source = same
        else:
            larger = m & (lab > value)
            source = larger if larger.any() else m
        cy, cx = np.nonzero(source)
        candidates = np.stack([cy, cx], axis=1).astype(np.float64)
        nearest = _nearest_valid(py, px, candidates)
        out[py, px] = img[cy[nearest], cx[nearest]]
    return out
