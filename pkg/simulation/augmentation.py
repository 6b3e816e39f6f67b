"""
Training-time augmentation of labeled radar scans.

Operations (each applied independently with its own probability, in this
fixed order so a given rng state always yields the same result):

1. instance copy: duplicate one connected moving cluster, rotate it by a
   random yaw about the sensor origin and append it with label 1
2. rotation about the origin (yaw)
3. isotropic position scaling
4. Gaussian position jitter

Velocities and RCS are never modified: rotating or scaling the scene about
the sensor leaves each point's radial speed unchanged.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist

from common.errors import ArgumentError, ConfigError
from data.radar_scan import MOVING, RadarScan

logger = logging.getLogger(__name__)


@dataclass
class AugConfig:
    """Augmentation probabilities and magnitudes."""

    p_instance: float = 0.5
    instance_link_radius: float = 2.0
    p_rotate: float = 0.5
    rotation_range: Tuple[float, float] = (-math.pi, math.pi)
    p_scale: float = 0.5
    scale_range: Tuple[float, float] = (0.95, 1.05)
    p_jitter: float = 0.5
    jitter_sigma: float = 0.1

    def __post_init__(self):
        for name in ("p_instance", "p_rotate", "p_scale", "p_jitter"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        self.rotation_range = tuple(self.rotation_range)
        self.scale_range = tuple(self.scale_range)
        if self.scale_range[0] <= 0 or self.scale_range[0] > self.scale_range[1]:
            raise ConfigError(f"scale_range must be positive and ordered, got {self.scale_range}")
        if self.jitter_sigma < 0 or self.instance_link_radius <= 0:
            raise ConfigError("jitter_sigma must be >= 0 and instance_link_radius > 0")

    @classmethod
    def disabled(cls) -> "AugConfig":
        return cls(p_instance=0.0, p_rotate=0.0, p_scale=0.0, p_jitter=0.0)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "AugConfig":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


def _rotation(yaw: float) -> np.ndarray:
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, -s], [s, c]])


def moving_clusters(scan: RadarScan, link_radius: float) -> np.ndarray:
    """
    Connected components of the moving points.

    Two moving points are linked when closer than link_radius.

    Returns:
        Component id per moving point (order of np.flatnonzero(labels == 1))
    """
    moving = np.flatnonzero(scan.labels == MOVING)
    if moving.size == 0:
        return np.zeros(0, dtype=np.int64)
    pts = scan.positions[moving]
    adjacency = csr_matrix(cdist(pts, pts) < link_radius)
    _, components = connected_components(adjacency, directed=False)
    return components.astype(np.int64)


def copy_instance(scan: RadarScan, rng: np.random.Generator, config: AugConfig) -> RadarScan:
    """Append a rotated copy of one moving cluster; no-op without moving points."""
    moving = np.flatnonzero(scan.labels == MOVING)
    if moving.size == 0:
        return scan
    components = moving_clusters(scan, config.instance_link_radius)
    chosen = int(rng.integers(components.max() + 1))
    members = moving[components == chosen]
    yaw = rng.uniform(-math.pi, math.pi)

    copied = scan.positions[members] @ _rotation(yaw).T
    return RadarScan(
        positions=np.concatenate([scan.positions, copied], axis=0),
        velocities=np.concatenate([scan.velocities, scan.velocities[members]]),
        rcs=np.concatenate([scan.rcs, scan.rcs[members]]),
        labels=np.concatenate([scan.labels, np.full(members.size, MOVING, dtype=np.int64)]),
        scan_id=scan.scan_id,
    )


def _with_positions(scan: RadarScan, positions: np.ndarray) -> RadarScan:
    return RadarScan(
        positions=positions,
        velocities=scan.velocities.copy(),
        rcs=scan.rcs.copy(),
        labels=scan.labels.copy(),
        scan_id=scan.scan_id,
    )


def augment(scan: RadarScan, rng: np.random.Generator, config: Optional[AugConfig] = None) -> RadarScan:
    """
    Randomly augment a labeled scan.

    Args:
        scan: Labeled input scan (left untouched)
        rng: Random generator; the result is a pure function of its state
        config: Probabilities and magnitudes (default AugConfig())

    Returns:
        New labeled scan with N' >= N points
    """
    if not scan.is_labeled:
        raise ArgumentError(f"augment needs a labeled scan, {scan.scan_id} has no labels")
    config = config or AugConfig()

    # every decision is drawn up front so skipped operations consume the same stream
    do_instance, do_rotate, do_scale, do_jitter = rng.uniform(size=4) < np.array(
        [config.p_instance, config.p_rotate, config.p_scale, config.p_jitter]
    )

    out = scan.subset(np.arange(scan.num_points))
    if do_instance:
        out = copy_instance(out, rng, config)
    positions = out.positions
    if do_rotate:
        positions = positions @ _rotation(rng.uniform(*config.rotation_range)).T
    if do_scale:
        positions = positions * rng.uniform(*config.scale_range)
    if do_jitter:
        positions = positions + rng.normal(0.0, config.jitter_sigma, size=positions.shape)
    return _with_positions(out, positions)
