"""
Frozen Radar Velocity Transformer: checkpoint-backed inference

INFERENCE ONLY - NO TRAINING, NO GRADIENT COMPUTATION

Loads a checkpoint archive, rebuilds the network from the model config
stored in its manifest, and exposes per-scan logits, moving probabilities
and labels.

Design Constraints:
- Parameters are frozen (requires_grad=False) and the module is in eval mode
- The network is rebuilt in the dtype the checkpoint was written in, so a
  reloaded model reproduces the saved model's logits bit-exactly
- Deterministic inference only

Author: Research Prototype
Date: 2026-10-17
"""

import logging
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np
import torch

from common.errors import VersionError
from data.radar_scan import RadarScan
from models.backbone.radar_velocity_transformer import (
    ModelConfig,
    RadarVelocityTransformer,
    build_model,
    count_parameters,
    labels_from_logits,
)
from numerics.checkpoint import assign_parameters, load_checkpoint
from numerics.optim import ParamStore

logger = logging.getLogger(__name__)

_TORCH_DTYPES = {"float32": torch.float32, "float64": torch.float64}


def load_model(path: Union[str, Path]) -> Tuple[RadarVelocityTransformer, Dict[str, Any]]:
    """
    Rebuild a model from a checkpoint.

    Returns:
        (model, manifest)

    Raises:
        VersionError: Unknown format version or config/parameter mismatch
        DataError: Unreadable archive
    """
    manifest, arrays = load_checkpoint(path)
    try:
        config = ModelConfig.from_dict(manifest["model_config"])
    except (TypeError, KeyError) as e:
        raise VersionError(f"Checkpoint {path} carries an unusable model config: {e}") from e

    dtypes = {entry["dtype"] for entry in manifest["parameters"]}
    if len(dtypes) != 1 or next(iter(dtypes)) not in _TORCH_DTYPES:
        raise VersionError(f"Checkpoint {path} mixes or uses unsupported dtypes: {sorted(dtypes)}")

    model = build_model(config).to(_TORCH_DTYPES[dtypes.pop()])
    assign_parameters(ParamStore.from_module(model), arrays)
    return model, manifest


class FrozenVelocityTransformer:
    """
    Wrapper for a TRAINED, FROZEN Radar Velocity Transformer.

    INFERENCE ONLY - This class does NOT support training.
    """

    def __init__(self, model: RadarVelocityTransformer, manifest: Dict[str, Any] = None):
        self.model = model
        self.manifest = manifest or {}
        self.model.eval()
        for param in self.model.parameters():
            param.requires_grad = False
        logger.info(
            f"Frozen model ready: channels {model.config.stage_channels}, "
            f"{count_parameters(model):,} parameters (trainable: 0)"
        )

    @classmethod
    def from_checkpoint(cls, path: Union[str, Path]) -> "FrozenVelocityTransformer":
        model, manifest = load_model(path)
        return cls(model, manifest)

    @property
    def config(self) -> ModelConfig:
        return self.model.config

    @torch.no_grad()
    def logits(self, scan: RadarScan) -> torch.Tensor:
        return self.model(scan)

    def predict_scan(self, scan: RadarScan) -> Tuple[np.ndarray, np.ndarray]:
        """
        Args:
            scan: Radar scan, N >= 1

        Returns:
            prob_moving: N moving-class probabilities, float64
            labels: N labels in {0, 1}, int64 (exact logit ties -> 0)
        """
        logits = self.logits(scan)
        prob_moving = torch.softmax(logits, dim=1)[:, 1].cpu().numpy().astype(np.float64)
        labels = labels_from_logits(logits)
        assert labels.shape == (scan.num_points,), "one label per point"
        return prob_moving, labels

    def predict(self, scan: RadarScan) -> np.ndarray:
        return self.predict_scan(scan)[1]


def load_frozen_model(path: Union[str, Path]) -> FrozenVelocityTransformer:
    """Load a checkpoint into a frozen inference wrapper."""
    return FrozenVelocityTransformer.from_checkpoint(path)
