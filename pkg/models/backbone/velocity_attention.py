"""
Velocity Transformer Layer and Block

Vector self-attention over each point's kNN neighborhood, where relative
position AND relative radial velocity enter both the attention logits and
the attended values.

For query j and neighbor i (first subscript = neighbor):

    l_ij = (W_q x_j - W_k x_i) + d^p_ij + d^v_ij        (per channel)
    a_ij = softmax_i(l_ij)                                (per channel)
    y_j  = sum_i a_ij * (W_v x_i + d^p_ij + d^v_ij)

with d^p = MLP(p_i - p_j) and d^v = MLP(v_i - v_j). The layer has no output
projection; the block wraps it between two FC -> LayerNorm -> GELU layers and
adds a residual connection. Positions and velocities pass through unchanged.

Author: Research Prototype
Date: 2026-10-17
"""

from typing import Optional, Tuple

import torch
import torch.nn as nn

from algorithms.sampling import knn
from models.backbone.encodings import EncodingMlp, StageState, relative_encoding
from numerics.kernels import FCNormAct, Linear, softmax


class VelocityTransformerLayer(nn.Module):
    """
    Vector attention with relative position and velocity encodings.

    Args:
        width: Feature width D_s (input and output)
        n_neighbors: Neighborhood size N_vtl (clamped to the cloud size)
        use_velocity_encoding: Drop every d^v term when False
    """

    def __init__(self, width: int, n_neighbors: int = 16, use_velocity_encoding: bool = True):
        super().__init__()
        self.width = width
        self.n_neighbors = n_neighbors
        self.w_q = Linear(width, width, bias=False)
        self.w_k = Linear(width, width, bias=False)
        self.w_v = Linear(width, width, bias=False)
        self.pos_enc = EncodingMlp(2, width, width)
        self.vel_enc = EncodingMlp(1, width, width) if use_velocity_encoding else None

    def attend(self, state: StageState, features: Optional[torch.Tensor] = None) -> Tuple[torch.Tensor, torch.Tensor]:
        """
        Returns:
            (output N x D, attention weights N x k_eff x D)
        """
        x = state.features if features is None else features
        nbr = knn(state.positions, state.positions, self.n_neighbors, state.tie_attributes())
        idx = nbr.as_tensor(x.device)

        q = self.w_q(x)
        k = self.w_k(x)
        v = self.w_v(x)

        delta = relative_encoding(state.positions, state.positions[idx], self.pos_enc)
        if self.vel_enc is not None:
            delta = delta + relative_encoding(state.velocities, state.velocities[idx], self.vel_enc)

        attn = softmax(q[:, None, :] - k[idx] + delta, axis=1)
        y = (attn * (v[idx] + delta)).sum(dim=1)
        return y, attn

    def forward(self, state: StageState, features: Optional[torch.Tensor] = None) -> torch.Tensor:
        y, _ = self.attend(state, features)
        return y


class VelocityTransformerBlock(nn.Module):
    """Residual block: x + FC2(VTL(FC1(x)))."""

    def __init__(self, width: int, n_neighbors: int = 16, use_velocity_encoding: bool = True):
        super().__init__()
        self.fc1 = FCNormAct(width, width)
        self.attention = VelocityTransformerLayer(width, n_neighbors, use_velocity_encoding)
        self.fc2 = FCNormAct(width, width)

    def forward(self, state: StageState) -> torch.Tensor:
        x = state.features
        h = self.attention(state, self.fc1(x))
        return x + self.fc2(h)
