"""
Moving-Class Intersection over Union

EVALUATION ONLY - No decision-making, no learning.

IoU = TP / (TP + FN + FP) for the moving class. Confusion counts are
integers, so pooling over a split is order-independent and can be done
from any number of workers.

Design Rationale:
- A split is scored by pooling its counts, not by averaging per-scan IoUs
- Handles the empty-class edge case: no moving point in prediction or
  truth gives IoU = 1.0 (perfect agreement)

Author: Research Prototype
Date: 2026-10-17
"""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Union

import numpy as np

from common.errors import ArgumentError


@dataclass(frozen=True)
class ConfusionCounts:
    """Confusion counts of the moving class."""
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @classmethod
    def from_labels(cls, pred: np.ndarray, truth: np.ndarray) -> "ConfusionCounts":
        pred = np.asarray(pred)
        truth = np.asarray(truth)
        if pred.shape != truth.shape or pred.ndim != 1:
            raise ArgumentError(f"prediction {pred.shape} and truth {truth.shape} must be equal-length vectors")
        for name, values in (("prediction", pred), ("truth", truth)):
            if values.size and not np.isin(values, (0, 1)).all():
                raise ArgumentError(f"{name} labels must lie in {{0, 1}}")
        p = pred == 1
        t = truth == 1
        return cls(
            tp=int(np.sum(p & t)),
            fp=int(np.sum(p & ~t)),
            fn=int(np.sum(~p & t)),
            tn=int(np.sum(~p & ~t)),
        )

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def iou(self) -> float:
        denom = self.tp + self.fn + self.fp
        if denom == 0:
            return 1.0
        return self.tp / denom


def pool_counts(counts: Iterable[ConfusionCounts]) -> ConfusionCounts:
    return sum(counts, ConfusionCounts())


def iou_moving(pred: np.ndarray, truth: np.ndarray) -> float:
    """
    Moving-class IoU of one label vector pair.

    Args:
        pred: Predicted labels (N,), values in {0, 1}
        truth: True labels (N,), values in {0, 1}

    Returns:
        IoU in [0, 1]; 1.0 when neither contains a moving point

    Raises:
        ArgumentError: Length mismatch or labels outside {0, 1}
    """
    return ConfusionCounts.from_labels(pred, truth).iou()


@dataclass
class EvalReport:
    """Pooled evaluation of one strategy on one split."""
    strategy: str
    split: str
    counts: ConfusionCounts
    latencies: List[float] = field(default_factory=list)
    num_scans: int = 0

    @property
    def iou_moving(self) -> float:
        return self.counts.iou()

    def to_dict(self) -> Dict:
        latencies = np.asarray(self.latencies, dtype=np.float64)
        return {
            "strategy": self.strategy,
            "split": self.split,
            "num_scans": self.num_scans,
            "num_points": self.counts.total,
            "iou_moving": self.iou_moving,
            "confusion": asdict(self.counts),
            "latency_mean_s": float(latencies.mean()) if latencies.size else None,
            "latencies_s": [float(x) for x in latencies],
        }

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
        return path
