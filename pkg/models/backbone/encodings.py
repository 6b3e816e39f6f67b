"""
Stage state and relative position/velocity encodings.

A StageState carries one resolution level of the point cloud through the
network. Positions, velocities and RCS never change inside a stage; only the
feature matrix is rewritten by the layers.
"""

from dataclasses import dataclass, replace

import numpy as np
import torch
import torch.nn as nn

from common.errors import DimensionError, InvariantError
from data.radar_scan import RadarScan
from numerics.kernels import Linear, gelu


@dataclass
class StageState:
    """
    One stage of the encoder/decoder.

    Attributes:
        features: N_s x D_s feature matrix
        positions: N_s x 2 positions
        velocities: N_s radial velocities
        rcs: N_s radar cross sections (used for deterministic tie-breaks)
        origin_indices: N_s indices into the stage-0 cloud
    """
    features: torch.Tensor
    positions: torch.Tensor
    velocities: torch.Tensor
    rcs: torch.Tensor
    origin_indices: torch.Tensor

    def __post_init__(self):
        n = self.positions.shape[0]
        lengths = {
            "features": self.features.shape[0],
            "velocities": self.velocities.shape[0],
            "rcs": self.rcs.shape[0],
            "origin_indices": self.origin_indices.shape[0],
        }
        bad = {k: v for k, v in lengths.items() if v != n}
        if bad:
            raise InvariantError(f"stage arrays disagree with {n} positions: {bad}")

    @classmethod
    def from_scan(cls, scan: RadarScan, features: torch.Tensor) -> "StageState":
        dtype = features.dtype
        return cls(
            features=features,
            positions=torch.as_tensor(scan.positions, dtype=dtype),
            velocities=torch.as_tensor(scan.velocities, dtype=dtype),
            rcs=torch.as_tensor(scan.rcs, dtype=dtype),
            origin_indices=torch.arange(scan.num_points, dtype=torch.long),
        )

    @property
    def num_points(self) -> int:
        return int(self.positions.shape[0])

    @property
    def width(self) -> int:
        return int(self.features.shape[-1])

    def tie_attributes(self) -> np.ndarray:
        """N x 4 (x, y, v, rcs) matrix for lexicographic tie-breaks."""
        attrs = torch.cat([self.positions, self.velocities[:, None], self.rcs[:, None]], dim=1)
        return attrs.detach().cpu().numpy().astype(np.float64)

    def with_features(self, features: torch.Tensor) -> "StageState":
        return replace(self, features=features)

    def select(self, indices: torch.Tensor, features: torch.Tensor) -> "StageState":
        """Sub-cloud at `indices` carrying new features."""
        return StageState(
            features=features,
            positions=self.positions[indices],
            velocities=self.velocities[indices],
            rcs=self.rcs[indices],
            origin_indices=self.origin_indices[indices],
        )


class EncodingMlp(nn.Module):
    """Two fully connected layers with GELU in between: linear -> GELU -> linear."""

    def __init__(self, in_features: int, hidden: int, out_features: int):
        super().__init__()
        self.in_features = in_features
        self.fc1 = Linear(in_features, hidden)
        self.fc2 = Linear(hidden, out_features)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.fc2(gelu(self.fc1(x)))


def relative_encoding(
    attrs_query: torch.Tensor,
    attrs_neighbor: torch.Tensor,
    mlp: EncodingMlp,
) -> torch.Tensor:
    """
    Encode neighbor-minus-query attribute differences.

    Args:
        attrs_query: M x A query attributes (A=2 positions, A=1 velocity)
        attrs_neighbor: M x k x A neighbor attributes
        mlp: Encoding MLP with in_features == A

    Returns:
        M x k x out_features encodings
    """
    if attrs_query.dim() == 1:
        attrs_query = attrs_query[:, None]
    if attrs_neighbor.dim() == 2:
        attrs_neighbor = attrs_neighbor[..., None]
    m, a = attrs_query.shape
    if attrs_neighbor.dim() != 3 or attrs_neighbor.shape[0] != m or attrs_neighbor.shape[2] != a:
        raise DimensionError(
            f"neighbor attributes {tuple(attrs_neighbor.shape)} do not match queries {tuple(attrs_query.shape)}"
        )
    if a != mlp.in_features:
        raise DimensionError(f"encoding MLP expects {mlp.in_features} attributes, got {a}")
    return mlp(attrs_neighbor - attrs_query[:, None, :])
