import colorsys

import numpy as np
import pytest

from garmwatch import (DEFAULT_BANDS, ColorBand, Frame, ShapeError,
                       ValidationError, color_mask, masked_to_gray, rgb_to_hsv)
from garmwatch.colorseg import hsv_to_rgb


def band(label):
    return next(b for b in DEFAULT_BANDS if b.label == label)


# ---------------------------------------------------------------------------
# HSV conversion

def test_pure_red():
    assert rgb_to_hsv((255, 0, 0)) == (0.0, 1.0, 1.0)


def test_achromatic_gray():
    h, s, v = rgb_to_hsv((128, 128, 128))
    assert (h, s) == (0.0, 0.0)
    assert v == pytest.approx(128 / 255)


def test_primaries_and_secondaries():
    assert rgb_to_hsv((0, 255, 0))[0] == 120.0
    assert rgb_to_hsv((0, 0, 255))[0] == 240.0
    assert rgb_to_hsv((255, 255, 0))[0] == 60.0
    assert rgb_to_hsv((0, 255, 255))[0] == 180.0
    assert rgb_to_hsv((255, 0, 255))[0] == 300.0


def test_hue_in_range():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        pixel = rng.integers(0, 256, size=3)
        h, s, v = rgb_to_hsv(pixel)
        assert 0.0 <= h < 360.0
        assert 0.0 <= s <= 1.0
        assert 0.0 <= v <= 1.0


def test_against_colorsys():
    rng = np.random.default_rng(8)
    for _ in range(2000):
        r, g, b = (int(c) for c in rng.integers(0, 256, size=3))
        h, s, v = rgb_to_hsv((r, g, b))
        ch, cs, cv = colorsys.rgb_to_hsv(r / 255, g / 255, b / 255)
        assert h == pytest.approx((ch * 360.0) % 360.0, abs=1e-9)
        assert s == pytest.approx(cs, abs=1e-12)
        assert v == pytest.approx(cv, abs=1e-12)


def test_round_trip_within_one_level():
    rng = np.random.default_rng(9)
    for _ in range(10000):
        rgb = tuple(int(c) for c in rng.integers(0, 256, size=3))
        back = hsv_to_rgb(*rgb_to_hsv(rgb))
        assert all(abs(a - b) <= 1 for a, b in zip(rgb, back))


# ---------------------------------------------------------------------------
# ColorBand validation

def test_band_validation():
    with pytest.raises(ValidationError):
        ColorBand("bad", ((10.0, 5.0),))
    with pytest.raises(ValidationError):
        ColorBand("bad", ((0.0, 361.0),))
    with pytest.raises(ValidationError):
        ColorBand("bad", ((0.0, 10.0), (20.0, 30.0), (40.0, 50.0)))
    with pytest.raises(ValidationError):
        ColorBand("bad", ((0.0, 10.0),), sat_min=1.5)


def test_default_bands_cover_red_wraparound():
    red = band("red")
    assert rgb_to_hsv((255, 10, 10))[0] < 10.0
    assert 350.0 <= rgb_to_hsv((255, 10, 30))[0] < 360.0


# ---------------------------------------------------------------------------
# color_mask

def test_pure_red_frame_all_ones():
    frame = Frame(0, np.full((4, 5, 3), (255, 0, 0), np.uint8))
    assert color_mask(frame, band("red")).all()


def test_black_frame_all_zeros():
    frame = Frame(0, np.zeros((4, 5, 3), np.uint8))
    for b in DEFAULT_BANDS:
        assert not color_mask(frame, b).any()


def test_mask_against_pixel_predicate():
    rng = np.random.default_rng(10)
    frame = Frame(0, rng.integers(0, 256, size=(12, 16, 3), dtype=np.uint8))
    for b in DEFAULT_BANDS:
        mask = color_mask(frame, b)
        for y in range(12):
            for x in range(16):
                h, s, v = rgb_to_hsv(frame.pixels[y, x])
                want = (any(lo <= h < hi for lo, hi in b.hue_ranges)
                        and s >= b.sat_min and v >= b.val_min)
                assert mask[y, x] == want, (x, y, b.label)


def test_default_bands_disjoint():
    rng = np.random.default_rng(11)
    frame = Frame(0, rng.integers(0, 256, size=(20, 20, 3), dtype=np.uint8))
    total = np.zeros((20, 20), int)
    for b in DEFAULT_BANDS:
        total += color_mask(frame, b).astype(int)
    assert total.max() <= 1


def test_masking_is_idempotent():
    rng = np.random.default_rng(12)
    frame = Frame(0, rng.integers(0, 256, size=(10, 10, 3), dtype=np.uint8))
    b = band("green")
    mask = color_mask(frame, b)
    # zero out everything outside the mask, re-mask: nothing changes
    masked = Frame(0, np.where(mask[:, :, None], frame.pixels, 0).astype(np.uint8))
    assert np.array_equal(color_mask(masked, b), mask)


# ---------------------------------------------------------------------------
# masked_to_gray

def test_gray_white_pixel():
    frame = Frame(0, np.full((1, 1, 3), 255, np.uint8))
    assert masked_to_gray(frame, np.ones((1, 1), bool))[0, 0] == 255


def test_gray_outside_mask_is_zero():
    frame = Frame(0, np.full((2, 2, 3), 200, np.uint8))
    mask = np.array([[True, False], [False, True]])
    gray = masked_to_gray(frame, mask)
    assert gray[0, 1] == 0 and gray[1, 0] == 0
    assert gray[0, 0] > 0 and gray[1, 1] > 0


def test_gray_red_is_76():
    frame = Frame(0, np.array([[[255, 0, 0]]], np.uint8))
    assert masked_to_gray(frame, np.ones((1, 1), bool))[0, 0] == 76


def test_gray_against_rounded_luma():
    rng = np.random.default_rng(13)
    frame = Frame(0, rng.integers(0, 256, size=(9, 9, 3), dtype=np.uint8))
    gray = masked_to_gray(frame, np.ones((9, 9), bool))
    for y in range(9):
        for x in range(9):
            r, g, b = (int(c) for c in frame.pixels[y, x])
            want = int(0.299 * r + 0.587 * g + 0.114 * b + 0.5)
            assert gray[y, x] == want


def test_gray_shape_error():
    frame = Frame(0, np.zeros((3, 3, 3), np.uint8))
    with pytest.raises(ShapeError):
        masked_to_gray(frame, np.ones((2, 3), bool))
