"""
Downsampling and upsampling between encoder/decoder stages.

VelocityDownsample halves the cloud: features are projected to the next
width, FPS picks ceil(N/2) centers, each center max-pools its kNN group of
[projected features, relative position, relative velocity], and an
FC -> LayerNorm -> GELU maps the pooled vector back to the stage width.

TransformerUpsample lifts coarse features onto the skip cloud with three
separate softmaxes (feature relation, position encoding, velocity
encoding); InterpolationUpsample is the inverse-distance-weighted
alternative over the 3 nearest coarse points.
"""

import math
from typing import Tuple

import torch
import torch.nn as nn

from algorithms.sampling import fps, knn
from common.errors import ArgumentError
from models.backbone.encodings import EncodingMlp, StageState, relative_encoding
from numerics.kernels import FCNormAct, Linear, softmax

INTERPOLATION_NEIGHBORS = 3


def downsampled_count(n: int) -> int:
    """Point count after one downsampling step: max(1, ceil(n / 2))."""
    return max(1, math.ceil(n / 2))


class VelocityDownsample(nn.Module):
    """Velocity-aware max-pool downsampling from width in_width to out_width."""

    def __init__(self, in_width: int, out_width: int, group_size: int = 16):
        super().__init__()
        self.group_size = group_size
        self.proj = Linear(in_width, out_width)
        self.fc = FCNormAct(out_width + 3, out_width)

    def group_and_pool(self, state: StageState) -> Tuple[torch.Tensor, torch.Tensor]:
        """
        Returns:
            (center indices N', pooled pre-FC features N' x (out_width + 3))
        """
        attrs = state.tie_attributes()
        device = state.features.device
        centers = torch.as_tensor(
            fps(state.positions, downsampled_count(state.num_points), attrs), dtype=torch.long, device=device
        )
        nbr = knn(state.positions[centers], state.positions, self.group_size, attrs)
        idx = nbr.as_tensor(device)

        projected = self.proj(state.features)
        rel_pos = state.positions[idx] - state.positions[centers][:, None, :]
        rel_vel = (state.velocities[idx] - state.velocities[centers][:, None])[..., None]
        grouped = torch.cat([projected[idx], rel_pos, rel_vel], dim=-1)
        return centers, grouped.amax(dim=1)

    def forward(self, state: StageState) -> StageState:
        centers, pooled = self.group_and_pool(state)
        return state.select(centers, self.fc(pooled))


class TransformerUpsample(nn.Module):
    """
    Attention-based upsampling of coarse features onto a skip cloud.

    Args:
        coarse_width: Width D_s of the coarse stage
        width: Width D of the skip stage (output width)
        n_neighbors: Coarse neighborhood size N_tus per skip point
        pos_width: Output width d_p of the position encoding
        vel_width: Output width d_v of the velocity encoding
        use_velocity_encoding: Drop the velocity group when False
    """

    def __init__(
        self,
        coarse_width: int,
        width: int,
        n_neighbors: int = 12,
        pos_width: int = 8,
        vel_width: int = 4,
        use_velocity_encoding: bool = True,
    ):
        super().__init__()
        self.n_neighbors = n_neighbors
        self.w_q = Linear(width, width, bias=False)
        self.w_k = Linear(coarse_width, width, bias=False)
        self.w_v = Linear(coarse_width, width, bias=False)
        self.pos_enc = EncodingMlp(2, pos_width, pos_width)
        self.vel_enc = EncodingMlp(1, vel_width, vel_width) if use_velocity_encoding else None
        extra = pos_width + (vel_width if use_velocity_encoding else 0)
        self.w_y = Linear(width + extra, width, bias=False)

    def attend(self, coarse: StageState, skip: StageState):
        """
        Returns:
            (z before the residual, tuple of attention groups (qk, p[, v]))
        """
        if coarse.num_points > skip.num_points:
            raise ArgumentError(
                f"upsampling needs N_coarse <= N_skip, got {coarse.num_points} > {skip.num_points}"
            )
        nbr = knn(skip.positions, coarse.positions, self.n_neighbors, coarse.tie_attributes())
        idx = nbr.as_tensor(skip.features.device)

        q = self.w_q(skip.features)
        k = self.w_k(coarse.features)[idx]
        v = self.w_v(coarse.features)[idx]
        delta_p = relative_encoding(skip.positions, coarse.positions[idx], self.pos_enc)

        groups = [softmax(q[:, None, :] - k, axis=1), softmax(delta_p, axis=1)]
        values = [v, delta_p]
        if self.vel_enc is not None:
            delta_v = relative_encoding(skip.velocities, coarse.velocities[idx], self.vel_enc)
            groups.append(softmax(delta_v, axis=1))
            values.append(delta_v)

        y = (torch.cat(groups, dim=-1) * torch.cat(values, dim=-1)).sum(dim=1)
        return self.w_y(y), tuple(groups)

    def forward(self, coarse: StageState, skip: StageState) -> torch.Tensor:
        z, _ = self.attend(coarse, skip)
        return skip.features + z


class InterpolationUpsample(nn.Module):
    """Inverse-distance-weighted interpolation of projected coarse features, added to the skip."""

    def __init__(self, coarse_width: int, width: int, eps: float = 1e-8):
        super().__init__()
        self.eps = eps
        self.proj = Linear(coarse_width, width)

    def forward(self, coarse: StageState, skip: StageState) -> torch.Tensor:
        if coarse.num_points > skip.num_points:
            raise ArgumentError(
                f"upsampling needs N_coarse <= N_skip, got {coarse.num_points} > {skip.num_points}"
            )
        nbr = knn(skip.positions, coarse.positions, INTERPOLATION_NEIGHBORS, coarse.tie_attributes())
        idx = nbr.as_tensor(skip.features.device)

        with torch.no_grad():
            dist = torch.linalg.norm(coarse.positions[idx] - skip.positions[:, None, :], dim=-1)
            weights = 1.0 / (dist + self.eps)
            weights = weights / weights.sum(dim=1, keepdim=True)
        interpolated = (weights[..., None] * self.proj(coarse.features)[idx]).sum(dim=1)
        return skip.features + interpolated
