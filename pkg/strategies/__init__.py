"""
Segmentation strategies behind one interface.

Available strategies:
- ThresholdStrategy: |v| > t velocity threshold baseline
- ModelStrategy: trained Radar Velocity Transformer
"""

from strategies.base_strategy import SegmentationStrategy
from strategies.model_strategy import ModelStrategy
from strategies.threshold_baseline import (
    REFERENCE_THRESHOLD,
    ThresholdStrategy,
    default_grid,
    threshold_baseline,
    threshold_curve,
    tune_threshold,
)

__all__ = [
    "SegmentationStrategy",
    "ModelStrategy",
    "REFERENCE_THRESHOLD",
    "ThresholdStrategy",
    "default_grid",
    "threshold_baseline",
    "threshold_curve",
    "tune_threshold",
]
