import math

import numpy as np
import pytest
import torch

from common.errors import ArgumentError
from models.backbone.radar_velocity_transformer import ModelConfig, build_model
from numerics.gradcheck import grad_check
from training.config import TrainConfig
from training.losses import combined_loss, lovasz_grad, lovasz_loss, weighted_cross_entropy
from conftest import random_scan


def jaccard_loss_of_set(errors_set, gt):
    return len(errors_set) / len(gt | errors_set)


def lovasz_extension_oracle(probs, labels):
    """Lovász extension as an integral over error thresholds of the set-level Jaccard loss."""
    values = []
    for c in range(probs.shape[1]):
        gt = {i for i, y in enumerate(labels) if y == c}
        if not gt:
            continue
        errors = [1.0 - probs[i, c] if i in gt else probs[i, c] for i in range(len(labels))]
        levels = sorted(set(errors), reverse=True) + [0.0]
        total = 0.0
        for hi, lo in zip(levels, levels[1:]):
            above = {i for i, e in enumerate(errors) if e >= hi}
            total += (hi - lo) * jaccard_loss_of_set(above, gt)
        values.append(total)
    return sum(values) / len(values)


def test_uniform_logits_weighted_ce_is_ln2():
    loss = weighted_cross_entropy(torch.zeros(1, 2), torch.tensor([1]), (0.5, 8.0))
    assert math.isclose(loss.item(), math.log(2.0), rel_tol=1e-12)


def test_weighted_ce_normalizes_by_weight_sum():
    logits = torch.tensor([[2.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    labels = torch.tensor([0, 1, 1])
    nll = -torch.log_softmax(logits, dim=1)[torch.arange(3), labels]
    w = torch.tensor([0.5, 8.0, 8.0])
    expected = (w * nll).sum() / w.sum()
    assert torch.isclose(weighted_cross_entropy(logits, labels, (0.5, 8.0)), expected, atol=1e-12)


def test_lovasz_single_point():
    p_moving = 0.3
    logits = torch.tensor([[0.0, math.log(p_moving / (1 - p_moving))]])
    assert math.isclose(lovasz_loss(logits, torch.tensor([1])).item(), 0.7, rel_tol=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_lovasz_matches_extension_oracle(seed):
    rng = np.random.default_rng(seed)
    logits = torch.as_tensor(rng.normal(0, 2, size=(4, 2)))
    labels = torch.as_tensor(rng.integers(0, 2, size=4))
    probs = torch.softmax(logits, dim=1).numpy()
    expected = lovasz_extension_oracle(probs, labels.tolist())
    assert abs(lovasz_loss(logits, labels).item() - expected) < 1e-10


def test_lovasz_is_zero_for_confident_correct_predictions():
    logits = torch.tensor([[50.0, -50.0], [-50.0, 50.0], [50.0, -50.0]])
    assert lovasz_loss(logits, torch.tensor([0, 1, 0])).item() < 1e-12


def test_lovasz_bounds_and_permutation_invariance():
    rng = np.random.default_rng(7)
    logits = torch.as_tensor(rng.normal(size=(30, 2)))
    labels = torch.as_tensor(rng.integers(0, 2, size=30))
    value = lovasz_loss(logits, labels)
    assert 0.0 <= value.item() <= 1.0
    perm = torch.as_tensor(rng.permutation(30))
    assert torch.isclose(lovasz_loss(logits[perm], labels[perm]), value, atol=1e-12)


def test_lovasz_grad_of_single_positive():
    assert lovasz_grad(torch.tensor([1.0])).tolist() == [1.0]
    assert lovasz_grad(torch.tensor([1.0, 0.0])).tolist() == [1.0, 0.0]


def test_combined_loss_weights():
    rng = np.random.default_rng(3)
    logits = torch.as_tensor(rng.normal(size=(12, 2)))
    labels = torch.as_tensor(rng.integers(0, 2, size=12))
    ce = weighted_cross_entropy(logits, labels, (0.5, 8.0))
    lov = lovasz_loss(logits, labels)

    assert torch.isclose(combined_loss(logits, labels, TrainConfig()), ce + lov, atol=1e-12)
    assert torch.isclose(combined_loss(logits, labels, TrainConfig(lambda_ce=0.0)), lov, atol=1e-12)
    assert torch.isclose(combined_loss(logits, labels, TrainConfig(lambda_lov=0.0)), ce, atol=1e-12)
    scaled = combined_loss(logits, labels, TrainConfig(lambda_ce=2.0, lambda_lov=0.5))
    assert torch.isclose(scaled, 2.0 * ce + 0.5 * lov, atol=1e-12)


def test_losses_reject_mismatched_shapes():
    with pytest.raises(ArgumentError):
        weighted_cross_entropy(torch.zeros(3, 2), torch.zeros(2, dtype=torch.long), (1.0, 1.0))
    with pytest.raises(ArgumentError):
        lovasz_loss(torch.zeros(3), torch.zeros(3, dtype=torch.long))


def test_loss_gradient_flows_into_the_model():
    model = build_model(ModelConfig(stage_channels=[8, 16], n_vtl=4, n_tus=3, k_ds=4))
    scan = random_scan(0, 20)
    loss = combined_loss(model(scan), torch.as_tensor(scan.labels), TrainConfig())
    loss.backward()
    assert torch.isfinite(loss)
    assert all(p.grad is not None and torch.isfinite(p.grad).all() for p in model.parameters())


@pytest.mark.parametrize("seed", range(20))
def test_combined_loss_gradients_through_tiny_model(seed):
    model = build_model(ModelConfig(stage_channels=[4, 8], n_vtl=4, n_tus=3, k_ds=4, d_p=4, d_v=2), seed=seed)
    scan = random_scan(seed, 8)
    labels = torch.as_tensor(scan.labels)
    report = grad_check(
        lambda: combined_loss(model(scan), labels, TrainConfig()),
        dict(model.named_parameters()),
        tolerance=1e-4,
        max_entries_per_param=2,
        seed=seed,
    )
    assert report.passed, report.failing
