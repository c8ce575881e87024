"""Detection quality metrics: IoU, matching, precision/recall, PR curves.

Boxes are compared by intersection-over-union with areas counted as w x h
grid cells, so integer boxes give exact rationals.  Per frame, detections
pair with ground-truth boxes greedily: highest IoU first, one-to-one, a
pair counting as a true positive only at IoU >= tau.  Greedy matching can
differ from the TP-maximizing assignment on adversarial overlaps; it is
used anyway for determinism and speed, and the divergence cases live in
the test suite as pinned fixtures.

Counts add across frames.  Precision is tp/(tp+fp), recall tp/(tp+fn);
an empty denominator scores 1.0 when the other side is empty too (nothing
to find, nothing claimed) and 0.0 otherwise.  Reported mean IoU averages
over matched pairs only; unmatched ground truths do not contribute zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .frameio import Annotation, BoundingBox, Detection


@dataclass(frozen=True)
class EvalCounts:
    tp: int
    fp: int
    fn: int


@dataclass
class EvalReport:
    counts: EvalCounts
    precision: float
    recall: float
    mean_iou: float
    threshold: float
    curve: list[tuple[float, float, float]] = field(default_factory=list)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes; 0 for disjoint boxes."""
    inter = a.intersection_area(b)
    return inter / (a.area + b.area - inter)


def match_frame(dets: list[BoundingBox], gts: list[BoundingBox],
                tau: float) -> tuple[EvalCounts, list[float]]:
    """Greedy one-to-one matching of one frame's boxes.

    Candidate pairs are taken in descending IoU order (ties by detection
    index, then ground-truth index); a pair is a true positive when its
    IoU is >= tau.  Returns the counts and the matched pairs' IoUs in
    match order.
    """
    if not 0.0 < tau < 1.0:
        raise ValidationError(f"tau must be in (0, 1), got {tau}")
    pairs = []
    for di, d in enumerate(dets):
        for gi, g in enumerate(gts):
            v = iou(d, g)
            if v >= tau:
                pairs.append((-v, di, gi))
    pairs.sort()
    det_used = [False] * len(dets)
    gt_used = [False] * len(gts)
    matched_ious = []
    for neg_v, di, gi in pairs:
        if det_used[di] or gt_used[gi]:
            continue
        det_used[di] = True
        gt_used[gi] = True
        matched_ious.append(-neg_v)
    tp = len(matched_ious)
    return EvalCounts(tp, len(dets) - tp, len(gts) - tp), matched_ious


def _ratio(num: int, den: int, other: int) -> float:
    if den > 0:
        return num / den
    return 1.0 if other == 0 else 0.0


def _by_frame(detections: list[Detection],
              annotations: list[Annotation]) -> list[tuple[list[BoundingBox], list[BoundingBox]]]:
    det_frames: dict[int, list[BoundingBox]] = {}
    for d in detections:
        det_frames.setdefault(d.frame_index, []).append(d.box)
    gt_frames: dict[int, list[BoundingBox]] = {}
    for ann in annotations:
        if ann.frame_index in gt_frames:
            raise ValidationError(f"duplicate annotation frame {ann.frame_index}")
        gt_frames[ann.frame_index] = list(ann.boxes)
    frames = sorted(det_frames.keys() | gt_frames.keys())
    return [(det_frames.get(i, []), gt_frames.get(i, [])) for i in frames]


def evaluate(detections: list[Detection], annotations: list[Annotation],
             tau: float = 0.55) -> EvalReport:
    """Match every frame at threshold tau and aggregate the counts.

    Frames present on only one side count with an empty box list for the
    other.
    """
    tp = fp = fn = 0
    all_ious: list[float] = []
    for det_boxes, gt_boxes in _by_frame(detections, annotations):
        counts, ious = match_frame(det_boxes, gt_boxes, tau)
        tp += counts.tp
        fp += counts.fp
        fn += counts.fn
        all_ious.extend(ious)
    mean_iou = sum(all_ious) / len(all_ious) if all_ious else 0.0
    return EvalReport(EvalCounts(tp, fp, fn),
                      precision=_ratio(tp, tp + fp, tp + fn),
                      recall=_ratio(tp, tp + fn, tp + fp),
                      mean_iou=mean_iou, threshold=tau)


DEFAULT_TAUS = tuple(round(0.05 * i, 10) for i in range(1, 20))


def pr_curve(detections: list[Detection], annotations: list[Annotation],
             taus=DEFAULT_TAUS) -> list[tuple[float, float, float]]:
    """Evaluate at each threshold; rows are (tau, precision, recall)."""
    taus = list(taus)
    if any(not 0.0 < t < 1.0 for t in taus):
        raise ValidationError("every tau must be in (0, 1)")
    if taus != sorted(taus):
        raise ValidationError("taus must be sorted ascending")
    rows = []
    for tau in taus:
        report = evaluate(detections, annotations, tau)
        rows.append((tau, report.precision, report.recall))
    return rows


def format_summary(report: EvalReport) -> str:
    c = report.counts
    return ("tp,fp,fn,precision,recall,mean_iou\n"
            f"{c.tp},{c.fp},{c.fn},{report.precision:.9f},"
            f"{report.recall:.9f},{report.mean_iou:.9f}")


def format_curve_csv(rows: list[tuple[float, float, float]]) -> str:
    lines = ["tau,precision,recall"]
    for tau, precision, recall in rows:
        lines.append(f"{tau:g},{precision:.9f},{recall:.9f}")
    return "\n".join(lines)
