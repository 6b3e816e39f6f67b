"""
Base Segmentation Strategy

This module defines the interface for all moving/static segmentation
strategies. Every strategy labels the points of one scan, so the velocity
threshold baseline and the trained network are evaluated the same way.

Design Constraints:
- segment() must not modify the scan
- Output: one label per point, values in {0, 1}, int64
- Strategies hold no per-scan state (safe to call from several threads)

Author: Research Prototype
Date: 2026-10-17
"""

from abc import ABC, abstractmethod

import numpy as np

from common.errors import InvariantError
from data.radar_scan import RadarScan


class SegmentationStrategy(ABC):
    """
    Abstract base class for segmentation strategies.

    All strategies must implement the segment() method.
    """

    def __init__(self, name: str):
        """
        Args:
            name: Human-readable strategy name
        """
        self.name = name

    @abstractmethod
    def segment(self, scan: RadarScan) -> np.ndarray:
        """
        Label every point of a scan.

        Args:
            scan: Radar scan with N >= 1 points

        Returns:
            Labels (N,), int64, 1 = moving, 0 = static
        """

    def validate_labels(self, labels: np.ndarray, scan: RadarScan) -> np.ndarray:
        """
        Check the output contract.

        Raises:
            InvariantError: Wrong length, dtype or values
        """
        labels = np.asarray(labels)
        if labels.shape != (scan.num_points,):
            raise InvariantError(f"{self.name}: {labels.shape} labels for {scan.num_points} points")
        if labels.dtype != np.int64 or not np.isin(labels, (0, 1)).all():
            raise InvariantError(f"{self.name}: labels must be int64 values in {{0, 1}}")
        return labels

    def __call__(self, scan: RadarScan) -> np.ndarray:
        return self.validate_labels(self.segment(scan), scan)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name='{self.name}')"
