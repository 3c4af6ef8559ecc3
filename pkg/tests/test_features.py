import numpy as np
import pytest

from lfstrata.errors import (
    CorruptHeaderError,
    DimensionMismatchError,
    PatchTooLargeError,
    UnfilledLabelsError,
)
from lfstrata.features import (
    assemble,
    extract_patches,
    read_manifest,
    read_tensor,
    write_manifest,
    write_tensor,
)


def _pair(img, mask):
    return (np.where(mask[:, :, None], img, 0.0), mask)


def test_identical_inputs_zero_differences(rng):
    img = rng.uniform(size=(8, 8, 3))
    full = np.ones((8, 8), dtype=bool)
    labels = np.full((8, 8), 3, dtype=np.int64)
    ft = assemble((img, full), (img, full), (img, full), labels, 4)
    assert ft.channels == 7
    np.testing.assert_array_equal(ft.data[:, :, :6], 0.0)
    assert not ft.gap_mask.any()


def test_label_channel_formula():
    img = np.zeros((2, 2, 3))
    full = np.ones((2, 2), dtype=bool)
    L = 8
    labels = np.array([[L, L // 2], [1, L]], dtype=np.int64)
    ft = assemble((img, full), (img, full), (img, full), labels, L)
    assert ft.data[0, 0, 6] == pytest.approx(0.5)
    assert ft.data[0, 1, 6] == pytest.approx(0.0)
    assert ft.data[1, 0, 6] == pytest.approx(1 / L - 0.5)
    # channel 6 range invariant
    assert ft.data[:, :, 6].min() >= 1 / L - 0.5
    assert ft.data[:, :, 6].max() <= 0.5


def test_gap_semantics(rng):
    h = w = 4
    vd_img = rng.uniform(0.2, 0.8, size=(h, w, 3))
    vd_mask = np.ones((h, w), dtype=bool)
    sp_mask = np.ones((h, w), dtype=bool)
    sp_mask[1, 1] = False  # gap in both granularities, but vd is valid there
    sp_img = rng.uniform(0.2, 0.8, size=(h, w, 3))
    labels = np.full((h, w), 2, dtype=np.int64)

    ft = assemble(_pair(vd_img, vd_mask), _pair(sp_img, sp_mask), _pair(sp_img, sp_mask), labels, 4)
    # not a completion target: vd still covers the pixel
    assert not ft.gap_mask[1, 1]
    # the zero-gap convention subtracts vd from a literal zero
    np.testing.assert_allclose(ft.data[1, 1, :3], -vd_img[1, 1], atol=1e-12)
    np.testing.assert_allclose(ft.data[1, 1, 3:6], -vd_img[1, 1], atol=1e-12)


def test_gap_mask_requires_all_three_ambiguous(rng):
    h = w = 3
    img = rng.uniform(size=(h, w, 3))
    m_all = np.ones((h, w), dtype=bool)
    m_gap = m_all.copy()
    m_gap[0, 0] = False
    labels = np.ones((h, w), dtype=np.int64)
    ft = assemble(_pair(img, m_gap), _pair(img, m_gap), _pair(img, m_gap), labels, 2)
    assert ft.gap_mask[0, 0]
    assert ft.gap_mask.sum() == 1
    # gap_mask is a subset of the ambiguous set of the reference render
    assert not (ft.gap_mask & m_gap).any()


def test_reconstruction_identity(rng):
    h = w = 6
    vd = rng.uniform(size=(h, w, 3))
    sp1 = rng.uniform(size=(h, w, 3))
    full = np.ones((h, w), dtype=bool)
    labels = np.full((h, w), 1, dtype=np.int64)
    ft = assemble((vd, full), (sp1, full), (vd, full), labels, 2)
    np.testing.assert_allclose(ft.data[:, :, :3] + ft.base, sp1, atol=1e-12)
    assert np.abs(ft.data[:, :, :6]).max() <= 1.0 + 1e-12


def test_unfilled_labels_rejected(rng):
    img = rng.uniform(size=(3, 3, 3))
    full = np.ones((3, 3), dtype=bool)
    labels = np.ones((3, 3), dtype=np.int64)
    labels[0, 0] = 0
    with pytest.raises(UnfilledLabelsError):
        assemble((img, full), (img, full), (img, full), labels, 2)


def test_dimension_mismatch_rejected(rng):
    full3 = np.ones((3, 3), dtype=bool)
    full4 = np.ones((4, 4), dtype=bool)
    with pytest.raises(DimensionMismatchError):
        assemble(
            (rng.uniform(size=(3, 3, 3)), full3),
            (rng.uniform(size=(4, 4, 3)), full4),
            (rng.uniform(size=(3, 3, 3)), full3),
            np.ones((3, 3), dtype=np.int64),
            2,
        )


# ---------------------------------------------------------------------------
# patches

def _tensor(rng, h, w):
    img = rng.uniform(size=(h, w, 3))
    full = np.ones((h, w), dtype=bool)
    labels = np.ones((h, w), dtype=np.int64)
    return assemble((img, full), (img, full), (img, full), labels, 2)


def test_single_patch_when_sizes_match(rng):
    ft = _tensor(rng, 128, 128)
    gt = rng.uniform(size=(128, 128, 3))
    patches = extract_patches(ft, gt, size=128, stride=64)
    assert len(patches) == 1
    np.testing.assert_array_equal(patches[0][0], ft.data)
    np.testing.assert_array_equal(patches[0][1], gt)
    np.testing.assert_array_equal(patches[0][2], ft.base)


def test_grid_patch_count(rng):
    ft = _tensor(rng, 256, 256)
    gt = rng.uniform(size=(256, 256, 3))
    patches = extract_patches(ft, gt, size=128, stride=64)
    assert len(patches) == 9  # 3 positions per axis


def test_patch_content_bit_exact(rng):
    ft = _tensor(rng, 64, 96)
    gt = rng.uniform(size=(64, 96, 3))
    patches = extract_patches(ft, gt, size=32, stride=32)
    idx = 0
    for y0 in range(0, 64 - 32 + 1, 32):
        for x0 in range(0, 96 - 32 + 1, 32):
            p, g, b = patches[idx]
            np.testing.assert_array_equal(p, ft.data[y0:y0 + 32, x0:x0 + 32])
            np.testing.assert_array_equal(g, gt[y0:y0 + 32, x0:x0 + 32])
            np.testing.assert_array_equal(b, ft.base[y0:y0 + 32, x0:x0 + 32])
            idx += 1


def test_patch_too_large(rng):
    ft = _tensor(rng, 16, 16)
    with pytest.raises(PatchTooLargeError):
        extract_patches(ft, np.zeros((16, 16, 3)), size=32, stride=8)


# ---------------------------------------------------------------------------
# LFT1 container

def test_tensor_round_trip_identical_bytes(tmp_path, rng):
    arr = rng.uniform(size=(4, 4, 7)).astype(np.float32)
    p1 = tmp_path / "a.lft"
    p2 = tmp_path / "b.lft"
    write_tensor(arr, p1)
    back = read_tensor(p1)
    np.testing.assert_array_equal(back, arr)
    write_tensor(back, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_tensor_wrong_magic(tmp_path):
    path = tmp_path / "bad.lft"
    path.write_bytes(b"NOPE" + b"\x00" * 32)
    with pytest.raises(CorruptHeaderError):
        read_tensor(path)


def test_tensor_dims_payload_mismatch(tmp_path, rng):
    arr = rng.uniform(size=(3, 3, 7)).astype(np.float32)
    path = tmp_path / "t.lft"
    write_tensor(arr, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-4])  # truncate one float
    with pytest.raises(CorruptHeaderError):
        read_tensor(path)


def test_manifest_round_trip(tmp_path):
    entries = [
        {"tensor": "a.lft", "ground_truth": "gt.png", "vd": "vd.png",
         "scene": "s1", "t": 20.0, "alpha": 5.0},
    ]
    path = tmp_path / "manifest.json"
    write_manifest(entries, path)
    back = read_manifest(path)
    assert back == entries
