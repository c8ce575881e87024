"""Color band masks over foreground frames, and grayscale conversion.

A ColorBand names a garment color as one or two hue intervals (two for
wrap-around reds) plus saturation and value floors.  color_mask picks the
pixels of a foreground frame falling inside a band; masked_to_gray turns
the picked pixels into an 8-bit luma raster, zero elsewhere.  Background
pixels of a foreground frame are exact black, so any band with a positive
value floor ignores them for free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, ValidationError
from .frameio import Frame


@dataclass(frozen=True)
class ColorBand:
    """A named region of HSV space: hue intervals [lo, hi) in degrees,
    saturation >= sat_min, value >= val_min."""

    label: str
    hue_ranges: tuple[tuple[float, float], ...]
    sat_min: float = 0.30
    val_min: float = 0.20

    def __post_init__(self):
        if not self.label:
            raise ValidationError("band label must be non-empty")
        if not 1 <= len(self.hue_ranges) <= 2:
            raise ValidationError(
                f"band {self.label}: need 1 or 2 hue ranges, got {len(self.hue_ranges)}")
        for lo, hi in self.hue_ranges:
            if not (0.0 <= lo < hi <= 360.0):
                raise ValidationError(
                    f"band {self.label}: bad hue range [{lo}, {hi})")
        if not 0.0 <= self.sat_min <= 1.0 or not 0.0 <= self.val_min <= 1.0:
            raise ValidationError(
                f"band {self.label}: sat_min and val_min must be in [0, 1]")


DEFAULT_BANDS = (
    ColorBand("red", ((0.0, 10.0), (350.0, 360.0))),
    ColorBand("yellow", ((40.0, 70.0),)),
    ColorBand("green", ((70.0, 170.0),)),
    ColorBand("blue", ((170.0, 260.0),)),
)

# Representative RGB per default band label, for overlay rendering.
DISPLAY_COLORS = {
    "red": (255, 0, 0),
    "yellow": (255, 220, 0),
    "green": (0, 200, 0),
    "blue": (0, 80, 255),
}


def rgb_to_hsv(pixel) -> tuple[float, float, float]:
    """Hexcone RGB -> (hue degrees in [0, 360), saturation, value).

    Hue is reported as 0 when saturation is 0.
    """
    r, g, b = (float(c) / 255.0 for c in pixel)
    v = max(r, g, b)
    c = v - min(r, g, b)
    if c == 0.0:
        h = 0.0
    elif v == r:
        h = 60.0 * (((g - b) / c) % 6.0)
    elif v == g:
        h = 60.0 * ((b - r) / c + 2.0)
    else:
        h = 60.0 * ((r - g) / c + 4.0)
    if h >= 360.0:
        h = 0.0
    s = 0.0 if v == 0.0 else c / v
    return h, s, v


def hsv_to_rgb(h: float, s: float, v: float) -> tuple[int, int, int]:
    """Inverse hexcone conversion, rounded to 8-bit channels."""
    c = v * s
    hp = (h % 360.0) / 60.0
    x = c * (1.0 - abs(hp % 2.0 - 1.0))
    rgb = [(c, x, 0.0), (x, c, 0.0), (0.0, c, x),
           (0.0, x, c), (x, 0.0, c), (c, 0.0, x)][int(hp) % 6]
    m = v - c
    return tuple(int(round((u + m) * 255.0)) for u in rgb)


def _hsv_planes(pixels: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Vectorized hexcone conversion over a (h, w, 3) uint8 raster.
    p = pixels.astype(np.float64) / 255.0
    r, g, b = p[..., 0], p[..., 1], p[..., 2]
    v = p.max(axis=2)
    c = v - p.min(axis=2)
    safe = np.where(c == 0.0, 1.0, c)
    h = np.where(v == r, ((g - b) / safe) % 6.0,
                 np.where(v == g, (b - r) / safe + 2.0, (r - g) / safe + 4.0))
    h = np.where(c == 0.0, 0.0, h * 60.0)
    h = np.where(h >= 360.0, 0.0, h)
    s = np.where(v == 0.0, 0.0, c / np.where(v == 0.0, 1.0, v))
    return h, s, v


def _band_mask_from_planes(h, s, v, band: ColorBand) -> np.ndarray:
    in_hue = np.zeros(h.shape, dtype=bool)
    for lo, hi in band.hue_ranges:
        in_hue |= (h >= lo) & (h < hi)
    return in_hue & (s >= band.sat_min) & (v >= band.val_min)


def color_mask(fframe: Frame, band: ColorBand) -> np.ndarray:
    """Bool mask of the pixels whose HSV falls inside the band."""
    return _band_mask_from_planes(*_hsv_planes(fframe.pixels), band)


def band_masks(fframe: Frame, bands) -> list[np.ndarray]:
    """color_mask for several bands with one shared HSV conversion."""
    h, s, v = _hsv_planes(fframe.pixels)
    return [_band_mask_from_planes(h, s, v, band) for band in bands]


def masked_to_gray(fframe: Frame, mask: np.ndarray) -> np.ndarray:
    """Rec. 601 luma (round-half-up) where the mask is set, 0 elsewhere.

    Returns a uint8 array of shape (height, width).
    """
    if mask.shape != (fframe.height, fframe.width):
        raise ShapeError(
            f"mask is {mask.shape}, frame is {(fframe.height, fframe.width)}")
    p = fframe.pixels.astype(np.float64)
    luma = np.floor(0.299 * p[..., 0] + 0.587 * p[..., 1] + 0.114 * p[..., 2] + 0.5)
    return np.where(mask.astype(bool), luma, 0.0).astype(np.uint8)
