import numpy as np
import pytest

from lfstrata.synthdata import (
    CheckerTexture,
    ConstantTexture,
    NoiseTexture,
    PlaneSpec,
    SceneSpec,
    generate_lightfield,
    oracle_render,
    random_scene,
    scene_from_json,
    scene_to_json,
)


def test_oracle_view_zero_is_reference_composite(two_plane_scene):
    img, disp, mask = oracle_render(two_plane_scene, 0.0)
    assert mask.all()
    # foreground square sits exactly on its region at view 0
    assert np.all(img[12:40, 10:26] == [0.9, 0.1, 0.1])
    assert np.all(disp[12:40, 10:26] == 2.0)
    assert np.all(disp[:12, :] == 0.0)


def test_oracle_square_shift_arithmetic():
    spec = SceneSpec(
        width=40, height=4,
        planes=(
            PlaneSpec(disparity=0.0, texture=ConstantTexture((0.2, 0.2, 0.2))),
            PlaneSpec(disparity=2.0, texture=ConstantTexture((1.0, 0.0, 0.0)), region=(10, 0, 20, 4)),
        ),
    )
    img, disp, mask = oracle_render(spec, 3.0)
    red = img[0, :, 0] == 1.0
    np.testing.assert_array_equal(np.nonzero(red)[0], np.arange(16, 26))
    assert np.all(img[0, 10:16, 0] == 0.2)  # background visible where the square left


def test_oracle_overlapping_foregrounds_near_wins():
    spec = SceneSpec(
        width=30, height=6,
        planes=(
            PlaneSpec(disparity=0.0, texture=ConstantTexture((0.0, 0.0, 0.0))),
            PlaneSpec(disparity=1.0, texture=ConstantTexture((0.3, 0.3, 0.3)), region=(5, 0, 20, 6)),
            PlaneSpec(disparity=2.0, texture=ConstantTexture((0.8, 0.8, 0.8)), region=(10, 0, 18, 6)),
        ),
    )
    img, disp, _ = oracle_render(spec, 0.0)
    assert np.all(img[0, 10:18, 0] == 0.8)  # d=2 wins wherever both cover
    assert np.all(disp[0, 10:18] == 2.0)


def test_oracle_plane_order_independence(three_plane_scene):
    img_a, disp_a, mask_a = oracle_render(three_plane_scene, 7.0)
    shuffled = SceneSpec(
        width=three_plane_scene.width,
        height=three_plane_scene.height,
        planes=tuple(reversed(three_plane_scene.planes)),
    )
    img_b, disp_b, mask_b = oracle_render(shuffled, 7.0)
    np.testing.assert_array_equal(img_a, img_b)
    np.testing.assert_array_equal(disp_a, disp_b)
    np.testing.assert_array_equal(mask_a, mask_b)


def test_oracle_integer_view_translates_textures(three_plane_scene):
    # with integer view*disparity products the oracle is an exact translate
    img0, disp0, _ = oracle_render(three_plane_scene, 0.0)
    img4, disp4, mask4 = oracle_render(three_plane_scene, 4.0)
    # background (d=0) pixels at view 4 that are background at view 0 too
    bg = (disp4 == 0) & (disp0 == 0) & mask4
    np.testing.assert_array_equal(img4[bg], img0[bg])


def test_generate_lightfield_m0_single_view(two_plane_scene):
    ds = generate_lightfield(two_plane_scene, 0)
    assert ds.M == 0
    img, disp, _ = oracle_render(two_plane_scene, 0.0)
    np.testing.assert_array_equal(ds.lightfield.view(0), img)
    np.testing.assert_array_equal(ds.disparity(0), disp)


def test_generate_lightfield_disparity_bit_exact(two_plane_scene):
    ds = generate_lightfield(two_plane_scene, 2)
    for v in range(-2, 3):
        _, disp, _ = oracle_render(two_plane_scene, v)
        np.testing.assert_array_equal(ds.disparity(v), disp)
        assert np.all(ds.confidence(v) == 1.0)


def test_generate_lightfield_nine_center_views(two_plane_scene):
    # M=4 gives the 9-view reference arity used throughout
    ds = generate_lightfield(two_plane_scene, 4)
    assert len(ds.lightfield.views) == 9
    assert list(ds.lightfield.indices) == list(range(-4, 5))


def test_scene_json_round_trip(tmp_path, three_plane_scene):
    path = tmp_path / "scene.json"
    scene_to_json(three_plane_scene, path)
    back = scene_from_json(path)
    assert back == three_plane_scene


def test_scene_requires_background():
    with pytest.raises(ValueError):
        SceneSpec(width=8, height=8, planes=(
            PlaneSpec(disparity=1.0, texture=ConstantTexture((1, 1, 1)), region=(0, 0, 4, 4)),
        ))


def test_scene_requires_distinct_disparities():
    with pytest.raises(ValueError):
        SceneSpec(width=8, height=8, planes=(
            PlaneSpec(disparity=1.0, texture=ConstantTexture((1, 1, 1))),
            PlaneSpec(disparity=1.0, texture=ConstantTexture((0, 0, 0)), region=(0, 0, 4, 4)),
        ))


def test_random_scene_contract(rng):
    for _ in range(25):
        spec = random_scene(rng)
        assert 2 <= len(spec.planes) <= 4
        background = [p for p in spec.planes if p.region is None]
        assert len(background) == 1 and background[0].disparity == 0.0
        regions = [p.region for p in spec.planes if p.region is not None]
        disparities = [p.disparity for p in spec.planes]
        assert len(set(disparities)) == len(disparities)
        assert all(float(d).is_integer() and 0 <= d <= 3 for d in disparities)
        # foreground regions pairwise disjoint
        for i in range(len(regions)):
            for j in range(i + 1, len(regions)):
                a, b = regions[i], regions[j]
                assert a[2] <= b[0] or b[2] <= a[0] or a[3] <= b[1] or b[3] <= a[1]


def test_textures_deterministic():
    x = np.array([[0.0, 1.0], [2.0, 3.5]])
    y = np.array([[0.0, 0.0], [1.0, 1.0]])
    n = NoiseTexture(seed=12)
    np.testing.assert_array_equal(n.sample(x, y), n.sample(x, y))
    c = CheckerTexture(2, (0, 0, 0), (1, 1, 1))
    np.testing.assert_array_equal(c.sample(x, y), c.sample(x, y))
    # integer translation leaves lattice textures unchanged
    np.testing.assert_array_equal(n.sample(x + 5, y), n.sample(x + 5.0, y))
