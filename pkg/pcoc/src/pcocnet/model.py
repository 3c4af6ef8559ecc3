"""Generator and context discriminator.

The generator follows a plain encoder-decoder: four stride-2 convolutions
(base width 32) compress the 7-channel conditioning stack, four mirrored
transposed convolutions restore resolution, and a linear head emits a
3-channel residual. The absolute prediction is residual + base rendering,
clamped to [0, 1]. The discriminator compresses a 3-channel image through
four stride-2 convolutions into a pooled feature vector and scores the
probability of it being a real view.

Both nets are fully convolutional: any spatial size divisible by 16 works,
the 128x128 training patch included.
"""

from __future__ import annotations

import torch
from torch import nn


class ShapeMismatchError(ValueError):
    """Input tensor has the wrong channel count or a non-divisible size."""


IN_CHANNELS = 7
OUT_CHANNELS = 3
DOWN_FACTOR = 16  # four stride-2 stages


def _check_input(x: torch.Tensor, channels: int) -> None:
    if x.ndim != 4 or x.shape[1] != channels:
        raise ShapeMismatchError(
            f"expected (B, {channels}, H, W) input, got {tuple(x.shape)}"
        )
    if x.shape[2] % DOWN_FACTOR or x.shape[3] % DOWN_FACTOR:
        raise ShapeMismatchError(
            f"spatial size {tuple(x.shape[2:])} must be divisible by {DOWN_FACTOR}"
        )


def _xavier_init(module: nn.Module) -> None:
    if isinstance(module, (nn.Conv2d, nn.ConvTranspose2d, nn.Linear)):
        nn.init.xavier_uniform_(module.weight)
        if module.bias is not None:
            nn.init.zeros_(module.bias)


class Generator(nn.Module):
    """Encoder-decoder mapping the 7-channel conditioning stack to a residual."""

    def __init__(self, base: int = 32):
        super().__init__()
        widths = [base, base * 2, base * 4, base * 8]
        enc = []
        c_in = IN_CHANNELS
        for c_out in widths:
            enc += [nn.Conv2d(c_in, c_out, 4, stride=2, padding=1), nn.LeakyReLU(0.2, inplace=True)]
            c_in = c_out
        self.encoder = nn.Sequential(*enc)

        dec = []
        for c_out in reversed(widths[:-1]):
            dec += [nn.ConvTranspose2d(c_in, c_out, 4, stride=2, padding=1), nn.ReLU(inplace=True)]
            c_in = c_out
        dec += [nn.ConvTranspose2d(c_in, OUT_CHANNELS, 4, stride=2, padding=1)]
        self.decoder = nn.Sequential(*dec)
        self.apply(_xavier_init)

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        _check_input(features, IN_CHANNELS)
        return self.decoder(self.encoder(features))

    def predict(self, features: torch.Tensor, base_render: torch.Tensor) -> torch.Tensor:
        """Absolute prediction: residual + base rendering, clamped to [0, 1]."""
        residual = self.forward(features)
        return torch.clamp(residual + base_render, 0.0, 1.0)


class Discriminator(nn.Module):
    """CNN that pools an image into a realness probability in (0, 1)."""

    def __init__(self, base: int = 32):
        super().__init__()
        widths = [base, base * 2, base * 4, base * 8]
        layers = []
        c_in = OUT_CHANNELS
        for c_out in widths:
            layers += [nn.Conv2d(c_in, c_out, 4, stride=2, padding=1), nn.LeakyReLU(0.2, inplace=True)]
            c_in = c_out
        self.features = nn.Sequential(*layers)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.head = nn.Linear(c_in, 1)
        self.apply(_xavier_init)

    def forward(self, image: torch.Tensor) -> torch.Tensor:
        _check_input(image, OUT_CHANNELS)
        h = self.pool(self.features(image)).flatten(1)
        return torch.sigmoid(self.head(h)).squeeze(1)
