"""Association metrics over batches of frame pairs.

Per frame: precision and recall of the predicted cross-view pairs against
ground truth, whether the wearer was identified, and the CMC rank of the true
wearer. Per batch: unweighted averages, the fraction of frames at exactly
1.0 (Prec@1 / Reca@1), wearer accuracy and the CMC curve.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass


class EmptyGroundTruthError(ValueError):
    """Frame scoring requires non-empty ground truth."""


class EmptyBatchError(ValueError):
    """Batch aggregation requires at least one frame."""


@dataclass(frozen=True)
class FrameMetrics:
    precision: float
    recall: float
    wearer_correct: bool
    cmc_rank: int


@dataclass(frozen=True)
class BatchMetrics:
    prec_avg: float
    reca_avg: float
    prec_at_1: float
    reca_at_1: float
    wearer_accuracy: float
    cmc_curve: tuple[float, ...]


def score_frame(
    predicted_pairs,
    gt_pairs,
    predicted_wearer,
    true_wearer,
    cmc_rank: int,
) -> FrameMetrics:
    """Score one frame's association against ground truth.

    Zero predictions score precision 1.0 (vacuously precise) and recall 0.0,
    so frames with an empty field of view do not register as precision
    failures. A correct pair requires exact id equality on both sides.
    """
    gt = {(str(t), str(h)) for t, h in gt_pairs}
    if not gt:
        raise EmptyGroundTruthError("ground-truth pairs must be non-empty")
    pred = {(str(t), str(h)) for t, h in predicted_pairs}
    correct = len(pred & gt)
    precision = correct / len(pred) if pred else 1.0
    recall = correct / len(gt)
    return FrameMetrics(
        precision=precision,
        recall=recall,
        wearer_correct=str(predicted_wearer) == str(true_wearer),
        cmc_rank=cmc_rank,
    )


def aggregate(frames: list[FrameMetrics]) -> BatchMetrics:
    """Unweighted aggregation over frames; permutation invariant."""
    if not frames:
        raise EmptyBatchError("need at least one frame")
    n = len(frames)
    max_rank = max(f.cmc_rank for f in frames)
    curve = tuple(
        sum(1 for f in frames if f.cmc_rank <= k) / n for k in range(1, max_rank + 1)
    )
    return BatchMetrics(
        prec_avg=sum(f.precision for f in frames) / n,
        reca_avg=sum(f.recall for f in frames) / n,
        prec_at_1=sum(1 for f in frames if f.precision == 1.0) / n,
        reca_at_1=sum(1 for f in frames if f.recall == 1.0) / n,
        wearer_accuracy=sum(1 for f in frames if f.wearer_correct) / n,
        cmc_curve=curve,
    )


def write_metrics_csv(
    path, frame_ids: list, frames: list[FrameMetrics], batch: BatchMetrics
) -> None:
    """Per-frame metric rows followed by a summary block of '#' lines."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame_id", "precision", "recall", "wearer_correct", "cmc_rank"])
        for fid, fm in zip(frame_ids, frames):
            writer.writerow(
                [fid, f"{fm.precision:.6f}", f"{fm.recall:.6f}", int(fm.wearer_correct), fm.cmc_rank]
            )
        fh.write(f"# prec_avg={batch.prec_avg:.6f}\n")
        fh.write(f"# reca_avg={batch.reca_avg:.6f}\n")
        fh.write(f"# prec_at_1={batch.prec_at_1:.6f}\n")
        fh.write(f"# reca_at_1={batch.reca_at_1:.6f}\n")
        fh.write(f"# wearer_accuracy={batch.wearer_accuracy:.6f}\n")
        fh.write("# cmc_curve=" + ",".join(f"{v:.6f}" for v in batch.cmc_curve) + "\n")
