"""
Segmentation losses: class-weighted cross-entropy and Lovász-Softmax.

Both take per-point logits (N x 2) and labels (N,) in {0, 1}.
"""

from typing import Sequence

import torch
import torch.nn.functional as F

from common.errors import ArgumentError
from training.config import TrainConfig


def _check(logits: torch.Tensor, labels: torch.Tensor) -> None:
    if logits.dim() != 2 or labels.dim() != 1 or logits.shape[0] != labels.shape[0]:
        raise ArgumentError(f"logits {tuple(logits.shape)} and labels {tuple(labels.shape)} do not match")


def weighted_cross_entropy(logits: torch.Tensor, labels: torch.Tensor, weights: Sequence[float]) -> torch.Tensor:
    """Cross-entropy normalized by the sum of per-point class weights."""
    _check(logits, labels)
    weight = torch.as_tensor(weights, dtype=logits.dtype, device=logits.device)
    return F.cross_entropy(logits, labels.long(), weight=weight, reduction="mean")


def lovasz_grad(gt_sorted: torch.Tensor) -> torch.Tensor:
    """
    Gradient of the Jaccard extension w.r.t. errors sorted descending.

    Args:
        gt_sorted: Binary ground truth of one class, in error-sorted order
    """
    gts = gt_sorted.sum()
    intersection = gts - gt_sorted.cumsum(0)
    union = gts + (1.0 - gt_sorted).cumsum(0)
    jaccard = 1.0 - intersection / union
    if gt_sorted.numel() > 1:
        jaccard[1:] = jaccard[1:] - jaccard[:-1]
    return jaccard


def lovasz_loss(logits: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Lovász-Softmax loss averaged over the classes present in `labels`."""
    _check(logits, labels)
    probs = torch.softmax(logits, dim=1)
    losses = []
    for c in range(logits.shape[1]):
        fg = (labels == c).to(probs.dtype)
        if fg.sum() == 0:
            continue
        errors = (fg - probs[:, c]).abs()
        errors_sorted, perm = torch.sort(errors, descending=True, stable=True)
        losses.append(torch.dot(errors_sorted, lovasz_grad(fg[perm])))
    if not losses:
        return logits.sum() * 0.0
    return torch.stack(losses).mean()


def combined_loss(logits: torch.Tensor, labels: torch.Tensor, config: TrainConfig) -> torch.Tensor:
    """lambda_ce * weighted CE + lambda_lov * Lovász-Softmax."""
    loss = logits.new_zeros(())
    if config.lambda_ce:
        loss = loss + config.lambda_ce * weighted_cross_entropy(logits, labels, config.class_weights)
    if config.lambda_lov:
        loss = loss + config.lambda_lov * lovasz_loss(logits, labels)
    return loss
