"""
Differentiable numeric kernels.

Thin, shape-checked wrappers over torch. Backward passes come from torch
autograd, so every kernel here accumulates gradients into whatever leaf
tensors it was called with.

Conventions:
    - Weight matrices are stored (Din, Dout): y = x @ W + b.
    - Leading dimensions of `x` are batch dimensions; the last one is the
      feature axis.
"""

import math
from typing import Optional

import torch
import torch.nn as nn
import torch.nn.functional as F

from common.errors import DimensionError

LAYER_NORM_EPS = 1e-5


def linear(
    x: torch.Tensor,
    weight: torch.Tensor,
    bias: Optional[torch.Tensor] = None,
) -> torch.Tensor:
    """
    Affine map y = x W (+ b).

    Args:
        x: Input (..., Din)
        weight: Weight matrix (Din, Dout)
        bias: Optional bias (Dout,)

    Returns:
        Output (..., Dout)

    Raises:
        DimensionError: If shapes do not conform
    """
    if weight.dim() != 2:
        raise DimensionError(f"weight must be 2-D (Din, Dout), got shape {tuple(weight.shape)}")
    if x.dim() < 1 or x.shape[-1] != weight.shape[0]:
        raise DimensionError(
            f"x feature width {tuple(x.shape)[-1:]} does not match weight rows "
            f"{weight.shape[0]} (x {tuple(x.shape)}, weight {tuple(weight.shape)})"
        )
    if bias is not None and (bias.dim() != 1 or bias.shape[0] != weight.shape[1]):
        raise DimensionError(
            f"bias shape {tuple(bias.shape)} does not match weight columns {weight.shape[1]}"
        )

    y = torch.matmul(x, weight)
    if bias is not None:
        y = y + bias
    return y


def gelu(x: torch.Tensor) -> torch.Tensor:
    """Exact GELU x·Φ(x), erf form."""
    return F.gelu(x, approximate="none")


def layer_norm(
    x: torch.Tensor,
    gamma: torch.Tensor,
    beta: torch.Tensor,
    eps: float = LAYER_NORM_EPS,
) -> torch.Tensor:
    """
    Normalize over the last axis to mean 0 / variance 1, then apply γ, β.
    """
    width = x.shape[-1]
    if gamma.shape != (width,) or beta.shape != (width,):
        raise DimensionError(
            f"LayerNorm affine shapes {tuple(gamma.shape)}/{tuple(beta.shape)} "
            f"do not match feature width {width}"
        )
    return F.layer_norm(x, (width,), gamma, beta, eps)


def softmax(x: torch.Tensor, axis: int) -> torch.Tensor:
    """Max-subtracted softmax along `axis`."""
    shifted = x - x.amax(dim=axis, keepdim=True).detach()
    exp = torch.exp(shifted)
    return exp / exp.sum(dim=axis, keepdim=True)


class Linear(nn.Module):
    """
    Linear layer with (Din, Dout) weight storage.

    Weights are Kaiming-uniform over fan-in, biases start at zero.
    """

    def __init__(self, in_features: int, out_features: int, bias: bool = True):
        super().__init__()
        self.in_features = in_features
        self.out_features = out_features
        self.weight = nn.Parameter(torch.empty(in_features, out_features))
        if bias:
            self.bias = nn.Parameter(torch.empty(out_features))
        else:
            self.register_parameter("bias", None)
        self.reset_parameters()

    def reset_parameters(self) -> None:
        bound = math.sqrt(6.0 / self.in_features)
        nn.init.uniform_(self.weight, -bound, bound)
        if self.bias is not None:
            nn.init.zeros_(self.bias)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return linear(x, self.weight, self.bias)

    def extra_repr(self) -> str:
        return f"in_features={self.in_features}, out_features={self.out_features}, bias={self.bias is not None}"


class LayerNorm(nn.Module):
    """LayerNorm with affine parameters γ=1, β=0 at init."""

    def __init__(self, width: int, eps: float = LAYER_NORM_EPS):
        super().__init__()
        self.eps = eps
        self.weight = nn.Parameter(torch.ones(width))
        self.bias = nn.Parameter(torch.zeros(width))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return layer_norm(x, self.weight, self.bias, self.eps)


class GELU(nn.Module):
    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return gelu(x)


class FCNormAct(nn.Module):
    """Fully connected layer followed by LayerNorm and GELU."""

    def __init__(self, in_features: int, out_features: int):
        super().__init__()
        self.fc = Linear(in_features, out_features)
        self.norm = LayerNorm(out_features)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return gelu(self.norm(self.fc(x)))
