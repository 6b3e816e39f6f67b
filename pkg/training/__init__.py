"""
Training: losses, hyperparameters and the training loop.
"""

from training.config import TrainConfig
from training.losses import combined_loss, lovasz_grad, lovasz_loss, weighted_cross_entropy
from training.trainer import EpochMetrics, TrainResult, evaluate_counts, train

__all__ = [
    "TrainConfig",
    "combined_loss",
    "lovasz_grad",
    "lovasz_loss",
    "weighted_cross_entropy",
    "EpochMetrics",
    "TrainResult",
    "evaluate_counts",
    "train",
]
