"""Manifest-driven sample loading and patch cropping."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lft import load_png, read_manifest, read_tensor, resolve_path


class EmptyManifestError(ValueError):
    """Manifest lists no usable samples."""


@dataclass(frozen=True)
class Sample:
    """One training sample: conditioning stack, ground truth, base rendering."""

    features: np.ndarray   # (H, W, 7) float32
    target: np.ndarray     # (H, W, 3) float32
    base: np.ndarray       # (H, W, 3) float32
    scene: str
    t: float


def load_samples(manifest_path) -> list[Sample]:
    """Load every manifest entry that has a ground-truth image."""
    manifest_path = Path(manifest_path)
    samples = []
    for entry in read_manifest(manifest_path):
        gt = entry.get("ground_truth")
        if not gt:
            continue
        features = read_tensor(resolve_path(entry["tensor"], manifest_path))
        target = load_png(resolve_path(gt, manifest_path))
        base = load_png(resolve_path(entry["vd"], manifest_path))
        if features.ndim != 3 or features.shape[2] != 7:
            raise ValueError(f"{entry['tensor']}: expected (H, W, 7) tensor, got {features.shape}")
        if target.shape[:2] != features.shape[:2] or base.shape[:2] != features.shape[:2]:
            raise ValueError(f"{entry['tensor']}: image sizes disagree with the tensor")
        samples.append(Sample(
            features=features.astype(np.float32),
            target=target,
            base=base,
            scene=str(entry.get("scene", "scene")),
            t=float(entry.get("t", 0.0)),
        ))
    if not samples:
        raise EmptyManifestError(f"{manifest_path}: no entries with ground truth")
    return samples


def crop_batch(samples: list[Sample], rng: np.random.Generator, batch_size: int, patch: int):
    """Random (sample, offset) crops stacked into channel-first arrays."""
    feats, gts, bases = [], [], []
    for _ in range(batch_size):
        s = samples[int(rng.integers(0, len(samples)))]
        h, w = s.features.shape[:2]
        if patch > h or patch > w:
            raise ValueError(f"patch {patch} exceeds sample size {h}x{w}")
        y0 = int(rng.integers(0, h - patch + 1))
        x0 = int(rng.integers(0, w - patch + 1))
        feats.append(s.features[y0:y0 + patch, x0:x0 + patch])
        gts.append(s.target[y0:y0 + patch, x0:x0 + patch])
        bases.append(s.base[y0:y0 + patch, x0:x0 + patch])
    to_cf = lambda stack: np.stack(stack).transpose(0, 3, 1, 2)
    return to_cf(feats), to_cf(gts), to_cf(bases)
