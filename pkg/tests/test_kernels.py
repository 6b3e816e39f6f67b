import math

import pytest
import torch

from common.errors import DimensionError
from numerics.kernels import FCNormAct, Linear, gelu, layer_norm, linear, softmax


def test_linear_matches_matmul_with_leading_dims():
    torch.manual_seed(0)
    x = torch.randn(3, 4, 5)
    w = torch.randn(5, 2)
    b = torch.randn(2)
    assert torch.allclose(linear(x, w, b), x @ w + b, atol=1e-12)


def test_linear_rejects_mismatched_widths():
    with pytest.raises(DimensionError):
        linear(torch.zeros(3, 4), torch.zeros(5, 2))
    with pytest.raises(DimensionError):
        linear(torch.zeros(3, 5), torch.zeros(5, 2), torch.zeros(3))


def test_gelu_is_exact_erf_form():
    x = torch.linspace(-4, 4, 17)
    expected = x * 0.5 * (1.0 + torch.erf(x / math.sqrt(2.0)))
    assert torch.allclose(gelu(x), expected, atol=1e-14)
    assert gelu(torch.zeros(1)).item() == 0.0


def test_layer_norm_normalizes_last_axis():
    torch.manual_seed(1)
    x = torch.randn(6, 8) * 3 + 2
    y = layer_norm(x, torch.ones(8), torch.zeros(8))
    assert torch.allclose(y.mean(dim=-1), torch.zeros(6), atol=1e-10)
    assert torch.allclose(y.var(dim=-1, unbiased=False), torch.ones(6), atol=1e-4)
    with pytest.raises(DimensionError):
        layer_norm(x, torch.ones(7), torch.zeros(7))


def test_softmax_is_shift_invariant_and_stable():
    x = torch.tensor([[1000.0, 1001.0, 999.0]])
    y = softmax(x, axis=1)
    assert torch.isfinite(y).all()
    assert torch.allclose(y, softmax(x - 1000.0, axis=1), atol=1e-15)
    assert torch.allclose(y.sum(dim=1), torch.ones(1), atol=1e-15)


def test_linear_module_layout_and_init():
    torch.manual_seed(2)
    layer = Linear(16, 4)
    assert layer.weight.shape == (16, 4)
    assert torch.all(layer.bias == 0)
    assert layer.weight.abs().max() <= math.sqrt(6.0 / 16)
    assert Linear(3, 2, bias=False).bias is None


def test_fc_norm_act_with_zero_weights_outputs_zero():
    block = FCNormAct(4, 4)
    with torch.no_grad():
        block.fc.weight.zero_()
    assert torch.equal(block(torch.randn(5, 4)), torch.zeros(5, 4))
