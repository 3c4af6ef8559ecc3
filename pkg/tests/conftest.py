import numpy as np
import pytest

from lfstrata.synthdata import (
    CheckerTexture,
    ConstantTexture,
    NoiseTexture,
    PlaneSpec,
    SceneSpec,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def two_plane_scene():
    """Background at disparity 0 plus one near square at disparity 2."""
    return SceneSpec(
        width=64, height=64,
        planes=(
            PlaneSpec(disparity=0.0, texture=CheckerTexture(4, (0.2, 0.3, 0.8), (0.7, 0.7, 0.1))),
            PlaneSpec(disparity=2.0, texture=ConstantTexture((0.9, 0.1, 0.1)), region=(10, 12, 26, 40)),
        ),
    )


@pytest.fixture
def three_plane_scene():
    return SceneSpec(
        width=64, height=64,
        planes=(
            PlaneSpec(disparity=0.0, texture=NoiseTexture(seed=5)),
            PlaneSpec(disparity=1.0, texture=ConstantTexture((0.1, 0.8, 0.2)), region=(36, 8, 52, 28)),
            PlaneSpec(disparity=3.0, texture=CheckerTexture(2, (0.9, 0.2, 0.1), (0.1, 0.2, 0.9)), region=(6, 30, 22, 52)),
        ),
    )
