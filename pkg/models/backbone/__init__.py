"""
Radar Velocity Transformer backbone: layers, network and the frozen
inference wrapper.
"""

from models.backbone.encodings import EncodingMlp, StageState, relative_encoding
from models.backbone.frozen_model import FrozenVelocityTransformer, load_frozen_model, load_model
from models.backbone.radar_velocity_transformer import (
    ModelConfig,
    RadarVelocityTransformer,
    build_model,
    count_parameters,
    forward,
    labels_from_logits,
    predict,
)
from models.backbone.resampling import (
    InterpolationUpsample,
    TransformerUpsample,
    VelocityDownsample,
    downsampled_count,
)
from models.backbone.velocity_attention import VelocityTransformerBlock, VelocityTransformerLayer

__all__ = [
    "EncodingMlp",
    "StageState",
    "relative_encoding",
    "FrozenVelocityTransformer",
    "load_frozen_model",
    "load_model",
    "ModelConfig",
    "RadarVelocityTransformer",
    "build_model",
    "count_parameters",
    "forward",
    "labels_from_logits",
    "predict",
    "InterpolationUpsample",
    "TransformerUpsample",
    "VelocityDownsample",
    "downsampled_count",
    "VelocityTransformerBlock",
    "VelocityTransformerLayer",
]
