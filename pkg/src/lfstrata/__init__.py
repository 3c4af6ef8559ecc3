"""Stratified light-field view extrapolation.

Renders novel sub-aperture views far outside a light field's reference
baseline by warping each reference through stratified disparity layers,
fusing the layers nearest-surface first, averaging over references, and
completing occlusion gaps with surface-consistent label guidance. The
:class:`~lfstrata.pipeline.NovelViewSynthesizer` estimator wraps the whole
pipeline behind a scikit-learn style fit/predict interface; the individual
stages are plain functions in the submodules.
"""

from . import errors
from .io import LightField, LightFieldDataset, load_dataset, load_image, save_image
from .metrics import psnr, ssim
from .pipeline import NovelViewSynthesizer, RenderArtifacts
from .sdr import (
    average_predictions,
    fuse,
    quantize_labels,
    render_target_disparity,
    sdr_render,
    stratify,
    warp_layer,
)
from .superpixel import segment, sp_disparity, sp_render
from .labelfill import dilate_fill, surface_fill_rgb
from .features import FeatureTensor, assemble, extract_patches, read_tensor, write_tensor
from .synthdata import SceneSpec, generate_lightfield, oracle_render, random_scene
from .warp import WarpResult, backward_warp, bicubic_weights, forward_splat

__version__ = "0.1.0"

__all__ = [
    "errors",
    "LightField",
    "LightFieldDataset",
    "load_dataset",
    "load_image",
    "save_image",
    "psnr",
    "ssim",
    "NovelViewSynthesizer",
    "RenderArtifacts",
    "average_predictions",
    "fuse",
    "quantize_labels",
    "render_target_disparity",
    "sdr_render",
    "stratify",
    "warp_layer",
    "segment",
    "sp_disparity",
    "sp_render",
    "dilate_fill",
    "surface_fill_rgb",
    "FeatureTensor",
    "assemble",
    "extract_patches",
    "read_tensor",
    "write_tensor",
    "SceneSpec",
    "generate_lightfield",
    "oracle_render",
    "random_scene",
    "WarpResult",
    "backward_warp",
    "bicubic_weights",
    "forward_splat",
    "__version__",
]
