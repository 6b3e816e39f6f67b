"""
Velocity Threshold Baseline

Labels a point moving iff its compensated radial speed exceeds t:
label = 1 iff |v| > t (strict). The threshold is tuned on a validation
split by grid search over t in {0.00, 0.01, ..., 10.00} m/s, maximizing the
pooled moving-class IoU; the smallest maximizer wins ties.

Reference operating point: t = 0.92 m/s on RadarScenes validation data.

Author: Research Prototype
Date: 2026-10-17
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from common.errors import ArgumentError
from data.radar_scan import MOVING, RadarScan
from strategies.base_strategy import SegmentationStrategy

logger = logging.getLogger(__name__)

REFERENCE_THRESHOLD = 0.92


def default_grid() -> np.ndarray:
    """Thresholds 0.00, 0.01, ..., 10.00 m/s."""
    return np.arange(1001) / 100.0


def threshold_baseline(scan: RadarScan, t: float) -> np.ndarray:
    """
    Args:
        scan: Radar scan
        t: Threshold in m/s, t >= 0 (inf allowed)

    Returns:
        Labels (N,), int64
    """
    if not t >= 0:
        raise ArgumentError(f"threshold must be >= 0, got {t}")
    return (np.abs(scan.velocities) > t).astype(np.int64)


def threshold_curve(scans: Sequence[RadarScan], grid: Optional[np.ndarray] = None) -> pd.DataFrame:
    """
    Pooled confusion counts and IoU at every grid threshold.

    Returns:
        DataFrame with columns threshold, tp, fp, fn, iou
    """
    if not scans:
        raise ArgumentError("threshold tuning needs a non-empty split")
    unlabeled = [s.scan_id for s in scans if not s.is_labeled]
    if unlabeled:
        raise ArgumentError(f"threshold tuning needs labeled scans, unlabeled: {unlabeled[:5]}")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)

    speeds = np.abs(np.concatenate([s.velocities for s in scans]))
    moving = np.concatenate([s.labels for s in scans]) == MOVING
    moving_speeds = np.sort(speeds[moving])
    static_speeds = np.sort(speeds[~moving])

    # points with |v| > t are those right of the last value <= t
    tp = moving_speeds.size - np.searchsorted(moving_speeds, grid, side="right")
    fp = static_speeds.size - np.searchsorted(static_speeds, grid, side="right")
    fn = moving_speeds.size - tp
    denom = tp + fp + fn
    iou = np.where(denom == 0, 1.0, tp / np.maximum(denom, 1))
    return pd.DataFrame({"threshold": grid, "tp": tp, "fp": fp, "fn": fn, "iou": iou})


def tune_threshold(scans: Sequence[RadarScan], grid: Optional[np.ndarray] = None) -> Tuple[float, pd.DataFrame]:
    """
    Grid-search the IoU-maximizing threshold over a labeled split.

    Returns:
        (t*, curve DataFrame); t* is the smallest grid maximizer

    Raises:
        ArgumentError: Empty or unlabeled split
    """
    curve = threshold_curve(scans, grid)
    best = int(np.argmax(curve["iou"].to_numpy()))
    t_star = float(curve["threshold"].iloc[best])
    logger.info(f"Tuned threshold t*={t_star:.2f} m/s (IoU {curve['iou'].iloc[best]:.4f}) on {len(scans)} scans")
    return t_star, curve


class ThresholdStrategy(SegmentationStrategy):
    """|v| > t segmentation."""

    def __init__(self, threshold: float = REFERENCE_THRESHOLD):
        if not threshold >= 0:
            raise ArgumentError(f"threshold must be >= 0, got {threshold}")
        super().__init__(name=f"Threshold |v| > {threshold:.2f}")
        self.threshold = threshold

    @classmethod
    def tuned(cls, scans: Sequence[RadarScan]) -> "ThresholdStrategy":
        t_star, _ = tune_threshold(scans)
        return cls(t_star)

    def segment(self, scan: RadarScan) -> np.ndarray:
        return threshold_baseline(scan, self.threshold)
