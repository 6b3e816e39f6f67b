"""Trained-network segmentation strategy."""

from pathlib import Path
from typing import Union

import numpy as np

from data.radar_scan import RadarScan
from models.backbone.frozen_model import FrozenVelocityTransformer
from strategies.base_strategy import SegmentationStrategy


class ModelStrategy(SegmentationStrategy):
    """Labels = argmax of a frozen Radar Velocity Transformer's logits."""

    def __init__(self, model: FrozenVelocityTransformer, name: str = "Radar Velocity Transformer"):
        super().__init__(name=name)
        self.model = model

    @classmethod
    def from_checkpoint(cls, path: Union[str, Path]) -> "ModelStrategy":
        return cls(FrozenVelocityTransformer.from_checkpoint(path))

    def segment(self, scan: RadarScan) -> np.ndarray:
        return self.model.predict(scan)
