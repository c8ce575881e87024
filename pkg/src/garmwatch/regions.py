"""Mask cleanup and contour extraction.

A grayscale color plane is thresholded to a binary mask, closed with a
square structuring element to fill pinholes left by embroidery and seams,
and split into 8-connected components.  Each component yields a Contour:
its outer boundary traced clockwise, its bounding box, and its exact pixel
count.  Regions below an area floor are dropped before clustering.

Closing is dilation followed by erosion.  Dilation treats pixels outside
the image as background; erosion treats them as foreground.  That pairing
makes the two operators an adjunction on the image lattice, so closing is
extensive and idempotent, holes against the image border included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ValidationError
from .frameio import BoundingBox

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)

# Moore neighborhood in clockwise order, (dx, dy) with y growing downward,
# starting East.
_OFFSETS = ((1, 0), (1, 1), (0, 1), (-1, 1),
            (-1, 0), (-1, -1), (0, -1), (1, -1))
_OFFSET_INDEX = {off: i for i, off in enumerate(_OFFSETS)}


@dataclass
class Contour:
    """Outer boundary of one foreground component.

    points are (x, y) pixel coordinates in clockwise trace order, starting
    at the component's topmost then leftmost pixel; area is the component's
    full pixel count, not the boundary length.
    """

    points: list[tuple[int, int]]
    bbox: BoundingBox
    area: int


def binarize(gframe: np.ndarray, threshold: int) -> np.ndarray:
    """Bool mask of the pixels strictly above the threshold."""
    return np.asarray(gframe) > threshold


def close(mask: np.ndarray, se_size: int = 5) -> np.ndarray:
    """Morphological closing with a square structuring element."""
    if se_size < 3 or se_size % 2 == 0:
        raise ValidationError(f"structuring element size must be odd and >= 3, got {se_size}")
    se = np.ones((se_size, se_size), dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    dilated = ndimage.binary_dilation(mask, structure=se, border_value=0)
    return ndimage.binary_erosion(dilated, structure=se, border_value=1)


def _trace_boundary(padded: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    # Moore-neighbor tracing with the repeated-transition stop rule.
    # padded has a one-pixel background ring, so neighbor reads never leave
    # the array.  start's west neighbor is background because start is the
    # component's topmost then leftmost pixel.
    def scan(px: tuple[int, int], back: int) -> int | None:
        for k in range(1, 9):
            d = (back + k) % 8
            dx, dy = _OFFSETS[d]
            if padded[px[1] + dy, px[0] + dx]:
                return d
        return None

    def step(cur: tuple[int, int], d: int) -> tuple[tuple[int, int], int]:
        # Move to the neighbor at direction d; the new backtrack points at
        # the background cell scanned just before it.
        nxt = (cur[0] + _OFFSETS[d][0], cur[1] + _OFFSETS[d][1])
        bx, by = _OFFSETS[(d - 1) % 8]
        bg_cell = (cur[0] + bx, cur[1] + by)
        return nxt, _OFFSET_INDEX[(bg_cell[0] - nxt[0], bg_cell[1] - nxt[1])]

    points = [start]
    d = scan(start, 4)
    if d is None:
        return points
    cur, back = step(start, d)
    first = (start, cur)
    points.append(cur)
    limit = 8 * padded.size + 16
    for _ in range(limit):
        d = scan(cur, back)
        nxt = (cur[0] + _OFFSETS[d][0], cur[1] + _OFFSETS[d][1])
        if (cur, nxt) == first:
            break
        cur, back = step(cur, d)
        points.append(cur)
    else:
        raise RuntimeError("contour trace failed to terminate")
    if len(points) > 1 and points[-1] == points[0]:
        points.pop()
    return points


def trace_contours(mask: np.ndarray) -> list[Contour]:
    """One Contour per 8-connected component, ordered by (bbox.y, bbox.x)."""
    mask = np.asarray(mask, dtype=bool)
    labels, count = ndimage.label(mask, structure=EIGHT_CONNECTED)
    contours = []
    for lab, slc in enumerate(ndimage.find_objects(labels), start=1):
        comp = labels[slc] == lab
        y0, x0 = slc[0].start, slc[1].start
        bbox = BoundingBox(x0, y0, comp.shape[1], comp.shape[0])
        padded = np.zeros((comp.shape[0] + 2, comp.shape[1] + 2), dtype=bool)
        padded[1:-1, 1:-1] = comp
        rows, cols = np.nonzero(comp)  # row-major: first hit is topmost, then leftmost
        start = (int(cols[0]) + 1, int(rows[0]) + 1)
        points = [(x - 1 + x0, y - 1 + y0) for x, y in _trace_boundary(padded, start)]
        contours.append(Contour(points, bbox, int(comp.sum())))
    contours.sort(key=lambda c: (c.bbox.y, c.bbox.x))
    return contours


def filter_small(contours: list[Contour], min_area: float) -> list[Contour]:
    """Keep the contours whose component area is at least min_area."""
    if min_area < 0:
        raise ValidationError(f"min_area must be >= 0, got {min_area}")
    return [c for c in contours if c.area >= min_area]
