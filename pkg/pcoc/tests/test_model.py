import numpy as np
import pytest
import torch

from pcocnet.model import Discriminator, Generator, ShapeMismatchError


def test_generator_shape_contract():
    gen = Generator()
    out = gen(torch.rand(2, 7, 128, 128))
    assert tuple(out.shape) == (2, 3, 128, 128)


def test_generator_finite_on_zero_input():
    gen = Generator()
    out = gen(torch.zeros(1, 7, 32, 32))
    assert torch.isfinite(out).all()


def test_generator_prediction_adds_base_and_clamps():
    gen = Generator()
    feats = torch.rand(1, 7, 32, 32)
    base = torch.rand(1, 3, 32, 32)
    pred = gen.predict(feats, base)
    assert pred.min() >= 0.0 and pred.max() <= 1.0
    residual = gen(feats)
    expected = torch.clamp(residual + base, 0, 1)
    assert torch.equal(pred, expected)


def test_generator_rejects_bad_shapes():
    gen = Generator()
    with pytest.raises(ShapeMismatchError):
        gen(torch.rand(1, 3, 32, 32))      # wrong channel count
    with pytest.raises(ShapeMismatchError):
        gen(torch.rand(1, 7, 30, 30))      # not divisible by 16


def test_discriminator_scores_in_unit_interval():
    disc = Discriminator()
    scores = disc(torch.rand(5, 3, 32, 32))
    assert tuple(scores.shape) == (5,)
    assert bool(((scores > 0) & (scores < 1)).all())


def test_discriminator_rejects_bad_shapes():
    disc = Discriminator()
    with pytest.raises(ShapeMismatchError):
        disc(torch.rand(1, 7, 32, 32))


def test_networks_deterministic_under_seed():
    torch.manual_seed(11)
    a = Generator()
    torch.manual_seed(11)
    b = Generator()
    x = torch.rand(1, 7, 32, 32)
    assert torch.equal(a(x), b(x))
