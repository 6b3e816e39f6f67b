"""
Evaluation Package

Modules:
    iou: Moving-class IoU, confusion counts and EvalReport
    evaluate_strategies: Pooled evaluation of segmentation strategies
    latency: Inference latency benchmark
    plots: Threshold curve and training curve plots
    acceptance: Run-level checks against the tuned threshold baseline

Usage:
    from evaluation.iou import iou_moving
    from evaluation.evaluate_strategies import evaluate_strategy
"""

from evaluation.iou import ConfusionCounts, EvalReport, iou_moving, pool_counts
from evaluation.latency import LatencyReport, benchmark_latency

__all__ = [
    "ConfusionCounts",
    "EvalReport",
    "iou_moving",
    "pool_counts",
    "LatencyReport",
    "benchmark_latency",
]
