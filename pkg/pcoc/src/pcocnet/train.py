"""Training: L1 pretraining followed by alternating adversarial steps.

The objective is content fidelity plus a weighted adversarial term,
``L = L1 + lambda * Lgan``, with the non-saturating generator form
``-log D(G(x))`` (non-negative for D in (0, 1]). Optimization is Adam with
betas (0.9, 0.999) at learning rate 1e-4; the generator trains alone for a
pretraining phase, then generator and discriminator alternate one step
each. Checkpoints capture the full optimizer and RNG state, so a resumed
run reproduces the original step sequence.
"""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch

from .data import EmptyManifestError, Sample, crop_batch, load_samples
from .model import Discriminator, Generator

_EPS = 1e-8


@dataclass
class TrainConfig:
    lambda_gan: float = 0.001
    batch_size: int = 20
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    pretrain_epochs: int = 200
    adversarial_steps: int = 200
    patch: int = 128
    seed: int = 0
    base_width: int = 32

    def __post_init__(self):
        if self.lambda_gan < 0:
            raise ValueError("lambda_gan must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    @property
    def total_steps(self) -> int:
        return self.pretrain_epochs + self.adversarial_steps


def l1_loss(pred: torch.Tensor, gt: torch.Tensor) -> torch.Tensor:
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch: {tuple(pred.shape)} vs {tuple(gt.shape)}")
    return torch.mean(torch.abs(pred - gt))


def gan_generator_term(disc_score: torch.Tensor) -> torch.Tensor:
    """Non-saturating adversarial term, bounded below by 0."""
    return -torch.log(torch.clamp(disc_score, min=_EPS)).mean()


def generator_loss(pred, gt, disc_score, lambda_gan: float) -> torch.Tensor:
    loss = l1_loss(pred, gt)
    if lambda_gan > 0:
        loss = loss + lambda_gan * gan_generator_term(disc_score)
    return loss


def discriminator_loss(real_score: torch.Tensor, fake_score: torch.Tensor) -> torch.Tensor:
    return (
        -torch.log(torch.clamp(real_score, min=_EPS)).mean()
        - torch.log(torch.clamp(1.0 - fake_score, min=_EPS)).mean()
    )


def _save_checkpoint(path, generator, discriminator, opt_g, opt_d, step, config, rng):
    torch.save({
        "generator": generator.state_dict(),
        "discriminator": discriminator.state_dict(),
        "opt_g": opt_g.state_dict(),
        "opt_d": opt_d.state_dict(),
        "step": step,
        "config": asdict(config),
        "torch_rng": torch.get_rng_state(),
        "numpy_rng": rng.bit_generator.state,
    }, path)


def load_generator(checkpoint_path) -> Generator:
    state = torch.load(checkpoint_path, map_location="cpu", weights_only=False)
    generator = Generator(base=state["config"].get("base_width", 32))
    generator.load_state_dict(state["generator"])
    generator.eval()
    return generator


def train(manifest, config: TrainConfig, out_dir=None, resume_from=None) -> Path:
    """Train on the manifest's samples; returns the checkpoint path.

    Writes ``checkpoint.pt`` and ``losses.csv`` (one row per executed step)
    into ``out_dir`` (default: the manifest's directory).
    """
    manifest = Path(manifest)
    samples = load_samples(manifest)
    out_dir = Path(out_dir) if out_dir is not None else manifest.parent
    out_dir.mkdir(parents=True, exist_ok=True)

    torch.manual_seed(config.seed)
    generator = Generator(base=config.base_width)
    discriminator = Discriminator(base=config.base_width)
    opt_g = torch.optim.Adam(generator.parameters(), lr=config.lr,
                             betas=(config.beta1, config.beta2))
    opt_d = torch.optim.Adam(discriminator.parameters(), lr=config.lr,
                             betas=(config.beta1, config.beta2))
    rng = np.random.default_rng(config.seed)
    start_step = 0

    if resume_from is not None:
        state = torch.load(resume_from, map_location="cpu", weights_only=False)
        generator.load_state_dict(state["generator"])
        discriminator.load_state_dict(state["discriminator"])
        opt_g.load_state_dict(state["opt_g"])
        opt_d.load_state_dict(state["opt_d"])
        torch.set_rng_state(state["torch_rng"])
        rng.bit_generator.state = state["numpy_rng"]
        start_step = int(state["step"])

    checkpoint_path = out_dir / "checkpoint.pt"
    losses_path = out_dir / "losses.csv"
    with open(losses_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "phase", "l1", "gan", "disc", "total"])

        for step in range(start_step + 1, config.total_steps + 1):
            feats, gts, bases = crop_batch(samples, rng, config.batch_size, config.patch)
            feats_t = torch.from_numpy(feats)
            gts_t = torch.from_numpy(gts)
            bases_t = torch.from_numpy(bases)
            pretraining = step <= config.pretrain_epochs

            # generator step
            opt_g.zero_grad()
            pred = torch.clamp(generator(feats_t) + bases_t, 0.0, 1.0)
            if pretraining or config.lambda_gan == 0:
                g_l1 = l1_loss(pred, gts_t)
                g_gan = torch.zeros(())
                g_total = g_l1
            else:
                score = discriminator(pred)
                g_l1 = l1_loss(pred, gts_t)
                g_gan = gan_generator_term(score)
                g_total = g_l1 + config.lambda_gan * g_gan
            g_total.backward()
            opt_g.step()

            # discriminator step (alternation phase only)
            if pretraining or config.lambda_gan == 0:
                d_loss = torch.zeros(())
            else:
                opt_d.zero_grad()
                with torch.no_grad():
                    fake = torch.clamp(generator(feats_t) + bases_t, 0.0, 1.0)
                d_loss = discriminator_loss(discriminator(gts_t), discriminator(fake))
                d_loss.backward()
                opt_d.step()

            writer.writerow([
                step,
                "pretrain" if pretraining else "adversarial",
                f"{g_l1.item():.8f}",
                f"{g_gan.item():.8f}",
                f"{d_loss.item():.8f}",
                f"{g_total.item():.8f}",
            ])

    _save_checkpoint(checkpoint_path, generator, discriminator, opt_g, opt_d,
                     config.total_steps, config, rng)
    return checkpoint_path


def export_predictions(checkpoint_path, manifest, out_dir=None) -> list[Path]:
    """Run the trained generator over every manifest sample and save PNGs."""
    from .lft import save_png

    manifest = Path(manifest)
    out_dir = Path(out_dir) if out_dir is not None else manifest.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    generator = load_generator(checkpoint_path)

    written = []
    for sample in load_samples(manifest):
        feats, base = _pad_to_grid(sample)
        with torch.no_grad():
            pred = generator.predict(feats, base)[0].numpy().transpose(1, 2, 0)
        h, w = sample.features.shape[:2]
        path = out_dir / f"pcoc_{sample.scene}_t{sample.t:g}.png"
        save_png(pred[:h, :w], path)
        written.append(path)
    return written


def _pad_to_grid(sample: Sample, factor: int = 16):
    h, w = sample.features.shape[:2]
    ph = (factor - h % factor) % factor
    pw = (factor - w % factor) % factor
    feats = np.pad(sample.features, ((0, ph), (0, pw), (0, 0)), mode="edge")
    base = np.pad(sample.base, ((0, ph), (0, pw), (0, 0)), mode="edge")
    to_t = lambda a: torch.from_numpy(a.transpose(2, 0, 1)[None])
    return to_t(feats), to_t(base)
