"""
Training loop for the Radar Velocity Transformer.

Per epoch: seeded shuffle, augmentation of every scan, gradient
accumulation over batch_size scans, one AdamW step per batch at the
epoch's cosine learning rate, then moving-class IoU on the validation
split. The parameters of the best validation epoch are restored at the end.

In double precision the whole run is a deterministic function of
(initial parameters, data, config).
"""

import copy
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
import torch

from common.errors import ArgumentError, NumericError
from data.radar_scan import RadarScan
from evaluation.iou import ConfusionCounts, pool_counts
from models.backbone.radar_velocity_transformer import RadarVelocityTransformer, labels_from_logits
from numerics.optim import LrSchedule, ParamStore, adamw_step, cosine_lr, init_optim_state
from simulation.augmentation import augment
from training.config import TrainConfig
from training.losses import combined_loss

logger = logging.getLogger(__name__)


@dataclass
class EpochMetrics:
    epoch: int
    lr: float
    train_loss: float
    val_iou: float


@dataclass
class TrainResult:
    model: RadarVelocityTransformer
    metrics: List[EpochMetrics] = field(default_factory=list)
    best_epoch: int = -1
    best_val_iou: float = -1.0


def evaluate_counts(model: RadarVelocityTransformer, scans: Sequence[RadarScan]) -> ConfusionCounts:
    """Pooled confusion counts of the model's predictions over labeled scans."""
    was_training = model.training
    model.eval()
    counts = []
    with torch.no_grad():
        for scan in scans:
            counts.append(ConfusionCounts.from_labels(labels_from_logits(model(scan)), scan.labels))
    model.train(was_training)
    return pool_counts(counts)


def _batches(order: np.ndarray, batch_size: int) -> List[np.ndarray]:
    return [order[i:i + batch_size] for i in range(0, len(order), batch_size)]


def train(
    model: RadarVelocityTransformer,
    train_scans: Sequence[RadarScan],
    val_scans: Sequence[RadarScan],
    config: TrainConfig,
    metrics_path: Optional[Union[str, Path]] = None,
    on_epoch: Optional[Callable[[EpochMetrics], None]] = None,
) -> TrainResult:
    """
    Train `model` in place and restore its best-validation parameters.

    Args:
        model: Network to train
        train_scans: Labeled training scans (non-empty)
        val_scans: Labeled validation scans (non-empty)
        config: Training recipe
        metrics_path: Optional JSON-lines file, one record per epoch
        on_epoch: Optional callback after each epoch

    Returns:
        TrainResult with per-epoch metrics and the best epoch

    Raises:
        ArgumentError: Empty or unlabeled split
        NumericError: Non-finite loss or gradient (epoch and scan reported)
    """
    if not train_scans or not val_scans:
        raise ArgumentError(f"train needs non-empty splits (train={len(train_scans)}, val={len(val_scans)})")
    unlabeled = [s.scan_id for s in list(train_scans) + list(val_scans) if not s.is_labeled]
    if unlabeled:
        raise ArgumentError(f"train needs labeled scans, unlabeled: {unlabeled[:5]}")
    config.validate()

    rng = np.random.default_rng(config.rng_seed)
    params = ParamStore.from_module(model)
    optim_state = init_optim_state(params, config.lr0, weight_decay=config.weight_decay)
    schedule = LrSchedule(config.lr0, config.epochs)

    metrics_file = None
    if metrics_path is not None:
        metrics_path = Path(metrics_path)
        metrics_path.parent.mkdir(parents=True, exist_ok=True)
        metrics_file = open(metrics_path, "w")

    result = TrainResult(model=model)
    best_state = None
    logger.info(
        f"Training on {len(train_scans)} scans ({len(val_scans)} val), "
        f"{config.epochs} epochs, {params.num_values():,} parameters"
    )
    try:
        for epoch in range(config.epochs):
            start = time.perf_counter()
            lr = cosine_lr(schedule, epoch)
            model.train()
            params.zero_grad()

            losses = []
            for batch in _batches(rng.permutation(len(train_scans)), config.batch_size):
                for index in batch:
                    scan = augment(train_scans[index], rng, config.aug)
                    logits = model(scan)
                    labels = torch.as_tensor(scan.labels, dtype=torch.long)
                    loss = combined_loss(logits, labels, config)
                    if not torch.isfinite(loss):
                        raise NumericError(
                            f"Non-finite loss {loss.item()} at epoch {epoch}, scan {scan.scan_id} "
                            f"({scan.num_points} points)"
                        )
                    (loss / len(batch)).backward()
                    losses.append(loss.item())
                try:
                    adamw_step(params, optim_state, lr)
                except NumericError as e:
                    raise NumericError(f"Epoch {epoch}: {e}") from e

            val_iou = evaluate_counts(model, val_scans).iou()
            metrics = EpochMetrics(epoch=epoch, lr=lr, train_loss=math.fsum(losses) / len(losses), val_iou=val_iou)
            result.metrics.append(metrics)
            if val_iou > result.best_val_iou:
                result.best_val_iou = val_iou
                result.best_epoch = epoch
                best_state = copy.deepcopy(model.state_dict())

            logger.info(
                f"Epoch {epoch + 1}/{config.epochs}: lr={lr:.2e} train_loss={metrics.train_loss:.4f} "
                f"val_iou={val_iou:.4f} ({time.perf_counter() - start:.1f}s)"
            )
            if metrics_file is not None:
                metrics_file.write(json.dumps(asdict(metrics)) + "\n")
                metrics_file.flush()
            if on_epoch is not None:
                on_epoch(metrics)
    finally:
        if metrics_file is not None:
            metrics_file.close()

    model.load_state_dict(best_state)
    model.eval()
    logger.info(f"Best validation IoU {result.best_val_iou:.4f} at epoch {result.best_epoch + 1}")
    return result
