"""End-to-end view synthesis behind a scikit-learn style estimator.

:class:`NovelViewSynthesizer` fits on a light-field dataset (the 2M+1
reference views with their disparity and confidence maps), precomputing the
view-independent structures: superpixel segmentations of the central view
at each granularity and their segment-wise disparity maps. ``predict``
then renders, for each requested angular position, the full artifact set:
the per-reference stratified renderings and their average, the
superpixel-granular renderings, the target-view disparity with quantized
and fill-completed labels, the classically completed image, and the
conditioning feature tensor for the learned corrector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .features import FeatureTensor, assemble
from .io import LightFieldDataset, load_dataset
from .labelfill import dilate_fill, surface_fill_rgb
from .sdr import (
    DEFAULT_LAYER_COUNT,
    average_predictions,
    quantize_labels,
    render_target_disparity,
    sdr_render,
)
from .superpixel import segment, sp_disparity, sp_render

__all__ = ["RenderArtifacts", "NovelViewSynthesizer"]


@dataclass(frozen=True)
class RenderArtifacts:
    """Everything produced for one target angular position ``t``."""

    t: float
    alpha: float
    avg: tuple                 # (image, mask) per the configured averaging mode
    avg_masked: tuple          # (image, mask), mask-aware averaging
    sp: dict                   # target_size -> (image, mask)
    target_disparity: tuple    # (disparity, mask)
    labels: np.ndarray
    labels_filled: np.ndarray
    fill_converged: bool
    completed: np.ndarray
    features: FeatureTensor


class NovelViewSynthesizer(BaseEstimator):
    """Renders novel views far outside a light field's reference baseline.

    Parameters
    ----------
    layers : int
        Number of stratified disparity layers.
    sp_sizes : tuple of int
        Superpixel granularities (pixels per segment); the first two feed
        the conditioning features.
    avg_mode : {"masked", "paper"}
        Multi-reference averaging: contributing views only, or plain sum
        over all views with gaps counted as zeros.
    conf_threshold : float
        Minimum confidence for a pixel to vote in segment-wise disparity.
    fill_window : int
        Window size of the label dilation fill.
    fill_max_iters : int or None
        Iteration budget for the dilation fill (None: height + width).
    """

    def __init__(self, layers: int = DEFAULT_LAYER_COUNT, sp_sizes=(100, 400),
                 avg_mode: str = "masked", conf_threshold: float = 0.5,
                 fill_window: int = 3, fill_max_iters: int | None = None):
        self.layers = layers
        self.sp_sizes = sp_sizes
        self.avg_mode = avg_mode
        self.conf_threshold = conf_threshold
        self.fill_window = fill_window
        self.fill_max_iters = fill_max_iters

    def fit(self, dataset, y=None):
        """Bind a dataset and precompute per-granularity segment disparities.

        ``dataset`` is a :class:`~lfstrata.io.LightFieldDataset` or a path
        to a dataset directory.
        """
        if not isinstance(dataset, LightFieldDataset):
            dataset = load_dataset(dataset)
        if self.avg_mode not in ("masked", "paper"):
            raise ValueError(f"avg_mode must be 'masked' or 'paper', got {self.avg_mode!r}")
        if int(self.layers) < 1:
            raise ValueError("layers must be >= 1")

        self.dataset_ = dataset
        center = dataset.lightfield.view(0)
        disparity0 = dataset.disparity(0)
        confidence0 = dataset.confidence(0)
        span = float(disparity0.max() - disparity0.min())
        jump = span / int(self.layers) if span > 0 else 0.0
        self.superpixels_ = {}
        self.sp_disparity_ = {}
        for size in self.sp_sizes:
            sp = segment(center, int(size))
            self.superpixels_[int(size)] = sp
            self.sp_disparity_[int(size)] = sp_disparity(
                disparity0, confidence0, sp,
                conf_threshold=self.conf_threshold, jump_interval=jump,
            )
        return self

    def predict(self, t):
        """Render artifacts for one angular position or a sequence of them."""
        if not hasattr(self, "dataset_"):
            raise RuntimeError("NovelViewSynthesizer must be fitted before predict")
        if np.ndim(t) == 0:
            return self._render(float(t))
        return [self._render(float(ti)) for ti in t]

    # ------------------------------------------------------------------

    def _render(self, t: float) -> RenderArtifacts:
        ds = self.dataset_
        L = int(self.layers)
        lf = ds.lightfield

        predictions = [
            sdr_render(lf.view(v), ds.disparity(v), t - v, L) for v in lf.indices
        ]
        avg_masked = average_predictions(predictions, mode="masked")
        avg = avg_masked if self.avg_mode == "masked" else average_predictions(predictions, mode="paper")

        sp_renders = {
            size: sp_render(lf.view(0), self.sp_disparity_[size], t, L)
            for size in self.sp_disparity_
        }

        target_disp, target_mask = render_target_disparity(ds.disparity(0), t, L)
        labels = quantize_labels(target_disp, target_mask, L)
        filled, converged = dilate_fill(labels, window=int(self.fill_window),
                                        max_iters=self.fill_max_iters)
        completed = surface_fill_rgb(avg_masked[0], avg_masked[1], filled)

        sizes = sorted(sp_renders)
        features = assemble(avg, sp_renders[sizes[0]], sp_renders[sizes[-1]], filled, L)

        alpha = abs(t) / ds.M if ds.M > 0 else float("inf")
        return RenderArtifacts(
            t=t,
            alpha=alpha,
            avg=avg,
            avg_masked=avg_masked,
            sp=sp_renders,
            target_disparity=(target_disp, target_mask),
            labels=labels,
            labels_filled=filled,
            fill_converged=converged,
            completed=completed,
            features=features,
        )
