"""Grouping of contours into garment regions.

Contours from one color plane are linked whenever the Euclidean gap
between their bounding boxes is at or below a threshold; the connected
components of that link graph are the region clusters (single linkage).
Clusters mostly covered by a person bounding box are discarded, since a
garment being worn is not a garment of interest on a rack.  Surviving
clusters become Detections scored by their area fraction of the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .frameio import BoundingBox, Detection, PersonBoxes
from .regions import Contour


@dataclass
class RegionCluster:
    """A maximal set of mutually-nearby contours from one color band."""

    members: list[Contour]
    bbox: BoundingBox
    color_label: str
    total_area: int


class UnionFind:
    """Disjoint sets over range(n) with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def box_gap(a: BoundingBox, b: BoundingBox) -> float:
    """Euclidean gap between two rectangles; 0 when they touch or overlap."""
    dx = max(0, max(a.x, b.x) - min(a.x2, b.x2))
    dy = max(0, max(a.y, b.y) - min(a.y2, b.y2))
    return math.hypot(dx, dy)


def cluster_contours(contours: list[Contour], color_label: str,
                     gap_threshold: float) -> list[RegionCluster]:
    """Single-linkage grouping of contours by bounding-box gap.

    Two contours land in the same cluster iff they are connected through
    pairs whose box gap is <= gap_threshold.  Output ordered by
    (bbox.y, bbox.x).
    """
    if gap_threshold < 0:
        raise ValidationError(f"gap_threshold must be >= 0, got {gap_threshold}")
    if not contours:
        return []
    uf = UnionFind(len(contours))
    for i in range(len(contours)):
        for j in range(i + 1, len(contours)):
            if box_gap(contours[i].bbox, contours[j].bbox) <= gap_threshold:
                uf.union(i, j)
    groups: dict[int, list[Contour]] = {}
    for i, contour in enumerate(contours):
        groups.setdefault(uf.find(i), []).append(contour)
    clusters = []
    for members in groups.values():
        bbox = members[0].bbox
        for m in members[1:]:
            bbox = bbox.cover(m.bbox)
        clusters.append(RegionCluster(members, bbox, color_label,
                                      sum(m.area for m in members)))
    clusters.sort(key=lambda c: (c.bbox.y, c.bbox.x))
    return clusters


def _union_intersection_area(bbox: BoundingBox, boxes: list[BoundingBox]) -> int:
    # Area of bbox covered by the union of boxes, by coordinate compression.
    clipped = []
    for b in boxes:
        x1, y1 = max(bbox.x, b.x), max(bbox.y, b.y)
        x2, y2 = min(bbox.x2, b.x2), min(bbox.y2, b.y2)
        if x1 < x2 and y1 < y2:
            clipped.append((x1, y1, x2, y2))
    if not clipped:
        return 0
    xs = sorted({v for box in clipped for v in (box[0], box[2])})
    ys = sorted({v for box in clipped for v in (box[1], box[3])})
    area = 0
    for xi in range(len(xs) - 1):
        for yi in range(len(ys) - 1):
            cx, cy = xs[xi], ys[yi]
            if any(b[0] <= cx < b[2] and b[1] <= cy < b[3] for b in clipped):
                area += (xs[xi + 1] - cx) * (ys[yi + 1] - cy)
    return area


def exclude_persons(clusters: list[RegionCluster], persons: PersonBoxes | None,
                    containment_min: float = 0.5) -> list[RegionCluster]:
    """Drop clusters whose bbox lies mostly under the person boxes.

    A cluster goes when the union of person boxes covers at least
    containment_min of its bbox area.
    """
    if not 0.0 <= containment_min <= 1.0:
        raise ValidationError(f"containment_min must be in [0, 1], got {containment_min}")
    if persons is None or not persons.boxes:
        return list(clusters)
    out = []
    for cluster in clusters:
        covered = _union_intersection_area(cluster.bbox, persons.boxes)
        if covered < containment_min * cluster.bbox.area:
            out.append(cluster)
    return out


def to_detections(clusters: list[RegionCluster], frame_index: int,
                  frame_area: int) -> list[Detection]:
    """One Detection per cluster; score is its area share of the frame."""
    if frame_area <= 0:
        raise ValidationError(f"frame_area must be > 0, got {frame_area}")
    return [Detection(frame_index, c.bbox, c.color_label,
                      min(1.0, c.total_area / frame_area))
            for c in clusters]
