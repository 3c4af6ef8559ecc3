import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from helpers import brute_force_dilate

from lfstrata.errors import NoKnownLabelsError, NoValidPixelsError, UnfilledLabelsError
from lfstrata.labelfill import dilate_fill, surface_fill_rgb


def test_center_zero_takes_max_neighbor():
    labels = np.array([
        [1, 2, 1],
        [1, 0, 2],
        [1, 1, 1],
    ])
    filled, converged = dilate_fill(labels, window=3)
    assert converged
    assert filled[1, 1] == 2
    # known pixels unchanged
    mask = labels > 0
    np.testing.assert_array_equal(filled[mask], labels[mask])


def test_no_zeros_is_fixed_point(rng):
    labels = rng.integers(1, 5, size=(6, 6))
    filled, converged = dilate_fill(labels, window=3)
    assert converged
    np.testing.assert_array_equal(filled, labels)


def test_matches_brute_force_oracle(rng):
    for _ in range(50):
        labels = rng.integers(0, 4, size=(8, 8))
        if not (labels > 0).any():
            labels[0, 0] = 1
        filled, converged = dilate_fill(labels, window=3)
        assert converged
        np.testing.assert_array_equal(filled, brute_force_dilate(labels, 3, 16))


def test_window_five_matches_brute_force(rng):
    labels = rng.integers(0, 3, size=(10, 10))
    labels[5, 5] = 2
    filled, _ = dilate_fill(labels, window=5)
    np.testing.assert_array_equal(filled, brute_force_dilate(labels, 5, 20))


@given(arrays(np.int64, (7, 7), elements=st.integers(0, 5)))
@settings(max_examples=60, deadline=None)
def test_dilate_properties(labels):
    if not (labels > 0).any():
        labels = labels.copy()
        labels[3, 3] = 1
    filled, converged = dilate_fill(labels, window=3)
    assert converged
    # monotone: never decreases, never alters a known pixel
    assert np.all(filled >= labels)
    known = labels > 0
    np.testing.assert_array_equal(filled[known], labels[known])
    # idempotent
    again, _ = dilate_fill(filled, window=3)
    np.testing.assert_array_equal(again, filled)


def test_all_zero_raises():
    with pytest.raises(NoKnownLabelsError):
        dilate_fill(np.zeros((4, 4), dtype=np.int64))


def test_unconverged_flag():
    labels = np.zeros((1, 12), dtype=np.int64)
    labels[0, 0] = 3
    filled, converged = dilate_fill(labels, window=3, max_iters=2)
    assert not converged
    assert (filled == 0).any()
    assert np.all(filled[0, :3] == 3)


def test_bad_window_rejected():
    with pytest.raises(ValueError):
        dilate_fill(np.ones((3, 3), dtype=np.int64), window=4)


def test_termination_bound(rng):
    labels = np.zeros((16, 16), dtype=np.int64)
    labels[0, 0] = 1
    filled, converged = dilate_fill(labels, window=3)  # default budget H+W
    assert converged
    assert np.all(filled == 1)


# ---------------------------------------------------------------------------
# surface_fill_rgb

def test_full_mask_identity(rng):
    img = rng.uniform(0, 1, size=(5, 5, 3))
    out = surface_fill_rgb(img, np.ones((5, 5), dtype=bool), np.ones((5, 5), dtype=np.int64))
    np.testing.assert_array_equal(out, img)


def test_gap_in_uniform_far_plane_fills_exactly():
    img = np.full((6, 10, 3), 0.25)
    mask = np.ones((6, 10), dtype=bool)
    mask[2:4, 4:7] = False
    img[~mask] = 0.0
    labels = np.full((6, 10), 2, dtype=np.int64)
    out = surface_fill_rgb(img, mask, labels)
    assert np.all(out[~mask] == 0.25)


def test_fill_never_crosses_label_boundary():
    # near plane (label 1) on the left is bright; far plane (label 2) on
    # the right is dark; the gap is labeled far -> only dark colors enter.
    img = np.zeros((4, 12, 3))
    img[:, :4] = 0.9      # near colors
    img[:, 8:] = 0.1      # far colors
    mask = np.ones((4, 12), dtype=bool)
    mask[:, 4:8] = False
    labels = np.full((4, 12), 2, dtype=np.int64)
    labels[:, :4] = 1
    out = surface_fill_rgb(img, mask, labels)
    assert np.all(out[:, 4:8] == 0.1)


def test_fallback_to_larger_label():
    # gap labeled 1 but label 1 has no valid pixel: nearest valid pixel of
    # a strictly larger label is used
    img = np.zeros((1, 5, 3))
    img[0, 3:] = 0.6
    mask = np.array([[False, False, False, True, True]])
    labels = np.array([[1, 1, 1, 2, 2]])
    out = surface_fill_rgb(img, mask, labels)
    assert np.all(out[0, :3] == 0.6)


def test_tie_broken_by_scanline_order():
    # the gap at (1, 1) is equidistant from (0, 1) and (2, 1): smallest y wins
    img = np.zeros((3, 3, 3))
    img[0, 1] = 0.2
    img[2, 1] = 0.8
    mask = np.zeros((3, 3), dtype=bool)
    mask[0, 1] = mask[2, 1] = True
    labels = np.ones((3, 3), dtype=np.int64)
    out = surface_fill_rgb(img, mask, labels)
    assert np.all(out[1, 1] == 0.2)


def test_unfilled_labels_rejected(rng):
    img = rng.uniform(size=(3, 3, 3))
    labels = np.ones((3, 3), dtype=np.int64)
    labels[1, 1] = 0
    with pytest.raises(UnfilledLabelsError):
        surface_fill_rgb(img, np.ones((3, 3), dtype=bool), labels)


def test_no_valid_pixels_raises(rng):
    img = rng.uniform(size=(3, 3, 3))
    with pytest.raises(NoValidPixelsError):
        surface_fill_rgb(img, np.zeros((3, 3), dtype=bool), np.ones((3, 3), dtype=np.int64))
