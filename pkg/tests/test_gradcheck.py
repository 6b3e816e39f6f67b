import pytest
import torch

from common.errors import ArgumentError
from numerics.gradcheck import grad_check
from numerics.kernels import FCNormAct


class _WrongSquare(torch.autograd.Function):
    @staticmethod
    def forward(ctx, x):
        ctx.save_for_backward(x)
        return x * x

    @staticmethod
    def backward(ctx, grad):
        (x,) = ctx.saved_tensors
        return grad * 3.0 * x  # true derivative is 2x


def test_passes_on_correct_gradients():
    torch.manual_seed(0)
    block = FCNormAct(4, 3)
    x = torch.randn(5, 4)
    report = grad_check(lambda: block(x), dict(block.named_parameters()), tolerance=1e-6)
    assert report.passed, report.per_parameter
    assert report.entries_checked == sum(p.numel() for p in block.parameters())


def test_detects_a_wrong_backward():
    w = torch.randn(6, requires_grad=True)
    report = grad_check(lambda: _WrongSquare.apply(w), {"w": w}, tolerance=1e-4)
    assert not report.passed
    assert report.failing == ["w"]


def test_unused_parameter_has_zero_gradient_and_passes():
    w = torch.randn(3, requires_grad=True)
    unused = torch.randn(2, requires_grad=True)
    report = grad_check(lambda: (w ** 3).sum(), {"w": w, "unused": unused})
    assert report.passed
    assert report.per_parameter["unused"] == 0.0


def test_entry_sampling_limits_work():
    w = torch.randn(50, requires_grad=True)
    report = grad_check(lambda: torch.sin(w), {"w": w}, max_entries_per_param=7)
    assert report.entries_checked == 7
    assert report.passed


def test_rejects_single_precision_parameters():
    w = torch.randn(3, dtype=torch.float32, requires_grad=True)
    with pytest.raises(ArgumentError):
        grad_check(lambda: w.sum(), {"w": w})
