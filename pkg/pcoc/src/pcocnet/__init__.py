"""Toy-scale parallax correction and occlusion completion network.

Consumes the conditioning tensors exported by the rendering pipeline
(LFT1 files listed in a JSON manifest), trains a small encoder-decoder
generator with an optional adversarial term, and writes corrected
predictions back as PNGs. This package speaks only the file interfaces:
it has no code dependency on the renderer.
"""

from .lft import read_manifest, read_tensor, write_tensor
from .model import Discriminator, Generator
from .train import TrainConfig, generator_loss, l1_loss, train

__version__ = "0.1.0"

__all__ = [
    "read_manifest",
    "read_tensor",
    "write_tensor",
    "Generator",
    "Discriminator",
    "TrainConfig",
    "generator_loss",
    "l1_loss",
    "train",
    "__version__",
]
