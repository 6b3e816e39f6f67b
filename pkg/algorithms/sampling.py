"""
Neighborhood Machinery: Farthest Point Sampling, kNN, Grouping

Every attention and resampling stage of the network is built on these three
kernels.

Design Constraints:
- Deterministic: FPS seeds at the point farthest from the centroid and every
  distance tie is broken by the lexicographic order of the point attributes
  (x, y, v, rcs), then by index
- Order-independent: the centroid is summed exactly (math.fsum), so for
  tie-free clouds both fps and knn are permutation-equivariant
- Exact: brute-force squared Euclidean distances, no approximation

kNN sorts the full M x N distance matrix with np.lexsort. Scans hold a few
hundred points, where this costs well under a millisecond; switch to a
spatial index if clouds grow past ~1e4 points.

Author: Research Prototype
Date: 2026-10-17
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import torch

from common.errors import ArgumentError, DimensionError, InvariantError

ArrayLike = Union[np.ndarray, torch.Tensor]


def _as_numpy(values: ArrayLike) -> np.ndarray:
    if isinstance(values, torch.Tensor):
        values = values.detach().cpu().numpy()
    return np.asarray(values, dtype=np.float64)


def _tie_attributes(positions: np.ndarray, attributes: Optional[ArrayLike]) -> np.ndarray:
    """Attribute matrix used for lexicographic tie-breaks (defaults to positions)."""
    if attributes is None:
        return positions
    attrs = _as_numpy(attributes)
    if attrs.ndim != 2 or attrs.shape[0] != positions.shape[0]:
        raise DimensionError(f"attributes must be N x A with N={positions.shape[0]}, got {attrs.shape}")
    return attrs


def _check_positions(positions: np.ndarray, name: str) -> None:
    if positions.ndim != 2 or positions.shape[1] != 2:
        raise DimensionError(f"{name} must be an N x 2 array, got shape {positions.shape}")


@dataclass
class NeighborhoodIndex:
    """
    Ordered neighbor lists of M queries into a reference set.

    Attributes:
        indices: M x k_effective int64 matrix; row j lists the neighbors of
                 query j, nearest first
        k_effective: min(k, N_ref)
        num_refs: size of the reference set the indices point into
    """
    indices: np.ndarray
    k_effective: int
    num_refs: int

    @property
    def num_queries(self) -> int:
        return int(self.indices.shape[0])

    def validate(self) -> None:
        if self.indices.ndim != 2 or self.indices.shape[1] != self.k_effective:
            raise InvariantError(f"neighbor matrix shape {self.indices.shape} != (M, {self.k_effective})")
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= self.num_refs):
            raise InvariantError(f"neighbor index outside [0, {self.num_refs})")

    def as_tensor(self, device: Optional[torch.device] = None) -> torch.Tensor:
        return torch.as_tensor(self.indices, dtype=torch.long, device=device)


def _select(candidates: np.ndarray, attrs: np.ndarray) -> int:
    """Lexicographically smallest (attributes, index) among candidate indices."""
    if candidates.size == 1:
        return int(candidates[0])
    sub = attrs[candidates]
    keys = (candidates,) + tuple(sub[:, c] for c in reversed(range(sub.shape[1])))
    return int(candidates[np.lexsort(keys)[0]])


def fps(positions: ArrayLike, m: int, attributes: Optional[ArrayLike] = None) -> np.ndarray:
    """
    Deterministic farthest point sampling.

    Args:
        positions: N x 2 point positions
        m: Number of points to select, 1 <= m <= N
        attributes: Optional N x A tie-break attributes (x, y, v, rcs);
                    positions are used when omitted

    Returns:
        int64 array of m distinct indices in selection order
    """
    pos = _as_numpy(positions)
    _check_positions(pos, "positions")
    n = pos.shape[0]
    if not 1 <= m <= n:
        raise ArgumentError(f"fps needs 1 <= m <= N, got m={m}, N={n}")
    attrs = _tie_attributes(pos, attributes)

    centroid = np.array([math.fsum(pos[:, 0]) / n, math.fsum(pos[:, 1]) / n])
    seed_d2 = ((pos - centroid) ** 2).sum(axis=1)

    selected = np.empty(m, dtype=np.int64)
    current = _select(np.flatnonzero(seed_d2 == seed_d2.max()), attrs)
    selected[0] = current

    min_d2 = np.full(n, np.inf)
    taken = np.zeros(n, dtype=bool)
    taken[current] = True
    for step in range(1, m):
        min_d2 = np.minimum(min_d2, ((pos - pos[current]) ** 2).sum(axis=1))
        masked = np.where(taken, -1.0, min_d2)
        current = _select(np.flatnonzero(masked == masked.max()), attrs)
        selected[step] = current
        taken[current] = True
    return selected


def knn(
    queries: ArrayLike,
    refs: ArrayLike,
    k: int,
    ref_attributes: Optional[ArrayLike] = None,
) -> NeighborhoodIndex:
    """
    Exact k-nearest neighbors with deterministic tie-break.

    Args:
        queries: M x 2 query positions
        refs: N x 2 reference positions, N >= 1
        k: Requested neighbor count (k >= 1); clamped to N
        ref_attributes: Optional N x A tie-break attributes of the refs

    Returns:
        NeighborhoodIndex with rows ordered by (distance, attributes, index)
    """
    q = _as_numpy(queries)
    r = _as_numpy(refs)
    _check_positions(q, "queries")
    _check_positions(r, "refs")
    if r.shape[0] < 1:
        raise ArgumentError("knn needs at least one reference point")
    if k < 1:
        raise ArgumentError(f"knn needs k >= 1, got {k}")
    attrs = _tie_attributes(r, ref_attributes)
    m, n = q.shape[0], r.shape[0]
    k_eff = min(k, n)

    d2 = ((q[:, None, :] - r[None, :, :]) ** 2).sum(axis=-1)
    shape = (m, n)
    keys = [np.broadcast_to(np.arange(n), shape)]
    keys += [np.broadcast_to(attrs[:, c], shape) for c in reversed(range(attrs.shape[1]))]
    keys.append(d2)
    order = np.lexsort(keys, axis=-1)
    return NeighborhoodIndex(indices=np.ascontiguousarray(order[:, :k_eff]).astype(np.int64), k_effective=k_eff, num_refs=n)


def group(source: ArrayLike, nbr: NeighborhoodIndex) -> ArrayLike:
    """
    Gather neighbor rows: out[j, i] = source[nbr.indices[j, i]].

    Works on tensors (autograd scatters gradients back additively) and on
    numpy arrays.

    Returns:
        M x k x D (or M x k for 1-D sources)
    """
    n = source.shape[0]
    if n != nbr.num_refs:
        raise InvariantError(f"neighborhood built for {nbr.num_refs} refs, source has {n} rows")
    nbr.validate()
    if isinstance(source, torch.Tensor):
        return source[nbr.as_tensor(source.device)]
    return np.asarray(source)[nbr.indices]
