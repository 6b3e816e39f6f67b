"""
Evaluate Segmentation Strategies

Runs a strategy over a labeled split, pools its confusion counts and
records the wall-clock time of every segment() call.

EVALUATION ONLY - No decision-making logic inside (uses existing modules).

Scans may be processed by a thread pool; counts are integers and are
collected per scan index, so the report does not depend on the schedule.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence, Tuple

import pandas as pd

from common.errors import ArgumentError
from data.radar_scan import RadarScan
from evaluation.iou import ConfusionCounts, EvalReport, pool_counts
from strategies.base_strategy import SegmentationStrategy

logger = logging.getLogger(__name__)


def _evaluate_one(strategy: SegmentationStrategy, scan: RadarScan) -> Tuple[ConfusionCounts, float]:
    start = time.perf_counter()
    labels = strategy(scan)
    elapsed = time.perf_counter() - start
    return ConfusionCounts.from_labels(labels, scan.labels), elapsed


def evaluate_strategy(
    strategy: SegmentationStrategy,
    scans: Sequence[RadarScan],
    split: str = "test",
    workers: int = 1,
) -> EvalReport:
    """
    Evaluate one strategy on a labeled split.

    Args:
        strategy: Segmentation strategy
        scans: Labeled scans
        split: Split name recorded in the report
        workers: Thread count (1 = sequential)

    Returns:
        EvalReport with pooled counts and per-scan latencies (scan order)
    """
    if not scans:
        raise ArgumentError(f"Cannot evaluate {strategy.name} on an empty split")
    unlabeled = [s.scan_id for s in scans if not s.is_labeled]
    if unlabeled:
        raise ArgumentError(f"Evaluation needs labeled scans, unlabeled: {unlabeled[:5]}")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda scan: _evaluate_one(strategy, scan), scans))
    else:
        results = [_evaluate_one(strategy, scan) for scan in scans]

    report = EvalReport(
        strategy=strategy.name,
        split=split,
        counts=pool_counts(counts for counts, _ in results),
        latencies=[elapsed for _, elapsed in results],
        num_scans=len(scans),
    )
    logger.info(f"{strategy.name} on {split}: IoU {report.iou_moving:.4f} over {report.counts.total} points")
    return report


def compare_strategies(
    strategies: Sequence[SegmentationStrategy],
    scans: Sequence[RadarScan],
    split: str = "test",
    workers: int = 1,
) -> Tuple[List[EvalReport], pd.DataFrame]:
    """Evaluate several strategies on the same split; returns reports and a summary table."""
    reports = [evaluate_strategy(s, scans, split, workers) for s in strategies]
    rows: List[Dict] = []
    for report in reports:
        row = report.to_dict()
        row.pop("latencies_s")
        row.update(row.pop("confusion"))
        rows.append(row)
    return reports, pd.DataFrame(rows)
