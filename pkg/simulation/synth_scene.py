"""
Synthetic radar scene generator.

Produces labeled, desk-scale scans that reproduce the regime a velocity
threshold cannot handle:

- static background: uniform positions, velocity ~ N(0, noise_sigma_vel), label 0
- moving clusters: compact blobs with one heading and speed each; every
  point reads the radial component of that motion along its own line of
  sight (plus noise), label 1
- clutter: uniform positions with Student-t velocities (multi-path false
  velocities; heavy tails push static points above any threshold), label 0

Velocities are emitted already ego-motion compensated. The generator is a
deterministic function of its config (including rng_seed) or of the rng
passed in.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from common.errors import ConfigError
from data.radar_scan import MOVING, STATIC, RadarScan

logger = logging.getLogger(__name__)

_HEADING_TRIES = 64


@dataclass
class SynthConfig:
    """Scene generator parameters (ranges are inclusive)."""

    n_static_range: Tuple[int, int] = (150, 250)
    n_clusters_range: Tuple[int, int] = (1, 4)
    points_per_cluster_range: Tuple[int, int] = (4, 12)
    cluster_speed_range: Tuple[float, float] = (1.0, 12.0)
    cluster_radius: float = 1.0
    min_cluster_range: float = 5.0
    min_radial_speed: float = 0.0
    noise_sigma_pos: float = 0.1
    noise_sigma_vel: float = 0.1
    clutter_fraction: float = 0.15
    clutter_df: float = 2.0
    clutter_scale: float = 1.5
    field_extent: float = 50.0
    rcs_static: Tuple[float, float] = (0.0, 5.0)
    rcs_moving: Tuple[float, float] = (5.0, 3.0)
    rcs_clutter: Tuple[float, float] = (-5.0, 4.0)
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("n_static_range", "n_clusters_range", "points_per_cluster_range", "cluster_speed_range"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ConfigError(f"{name} must be a non-empty, non-negative range, got {(lo, hi)}")
            setattr(self, name, (lo, hi))
        for name in ("noise_sigma_pos", "noise_sigma_vel", "cluster_radius", "clutter_scale"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0.0 <= self.clutter_fraction <= 1.0:
            raise ConfigError(f"clutter_fraction must lie in [0, 1], got {self.clutter_fraction}")
        if self.clutter_df <= 0:
            raise ConfigError(f"clutter_df must be > 0, got {self.clutter_df}")
        if not 0 <= self.min_cluster_range <= self.field_extent:
            raise ConfigError("min_cluster_range must lie in [0, field_extent]")
        if self.n_static_range[0] + self.n_clusters_range[0] * self.points_per_cluster_range[0] < 1:
            raise ConfigError("Config allows scenes without any static or moving point")

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "SynthConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        for key, value in known.items():
            if isinstance(value, list):
                known[key] = tuple(value)
        return cls(**known)

    def expected_moving_fraction(self) -> float:
        """Expected share of moving points among all points (ratio of expectations)."""
        static = sum(self.n_static_range) / 2.0
        moving = (sum(self.n_clusters_range) / 2.0) * (sum(self.points_per_cluster_range) / 2.0)
        if self.clutter_fraction >= 1.0:
            return 0.0
        return (1.0 - self.clutter_fraction) * moving / (static + moving)


@dataclass
class ClusterTruth:
    """Ground truth of one moving cluster."""
    center: np.ndarray
    heading: float
    speed: float
    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))


def _uniform_positions(rng: np.random.Generator, n: int, extent: float) -> np.ndarray:
    return rng.uniform(-extent, extent, size=(n, 2))


def _radial_speeds(points: np.ndarray, heading: float, speed: float) -> np.ndarray:
    norms = np.linalg.norm(points, axis=1, keepdims=True)
    lines_of_sight = points / np.maximum(norms, 1e-9)
    direction = np.array([math.cos(heading), math.sin(heading)])
    return speed * (lines_of_sight @ direction)


def _moving_cluster(rng: np.random.Generator, config: SynthConfig) -> Tuple[np.ndarray, np.ndarray, ClusterTruth]:
    n_points = int(rng.integers(config.points_per_cluster_range[0], config.points_per_cluster_range[1] + 1))
    distance = rng.uniform(config.min_cluster_range, config.field_extent)
    bearing = rng.uniform(-math.pi, math.pi)
    center = distance * np.array([math.cos(bearing), math.sin(bearing)])
    points = center + rng.normal(0.0, config.cluster_radius / 2.0, size=(n_points, 2))
    speed = float(rng.uniform(*config.cluster_speed_range))

    heading = float(rng.uniform(-math.pi, math.pi))
    radial = _radial_speeds(points, heading, speed)
    if config.min_radial_speed > 0:
        tries = 1
        while np.abs(radial).min() < config.min_radial_speed and tries < _HEADING_TRIES:
            heading = float(rng.uniform(-math.pi, math.pi))
            radial = _radial_speeds(points, heading, speed)
            tries += 1
        if np.abs(radial).min() < config.min_radial_speed:
            heading = bearing
            radial = _radial_speeds(points, heading, speed)

    return points, radial, ClusterTruth(center=center, heading=heading, speed=speed)


def synth_scene_with_truth(
    config: SynthConfig,
    rng: Optional[np.random.Generator] = None,
    scan_id: str = "synth",
) -> Tuple[RadarScan, List[ClusterTruth]]:
    """
    Generate one labeled scene and the truth of its moving clusters.

    Args:
        config: Generator parameters
        rng: Random generator (default: seeded from config.rng_seed)
        scan_id: Identifier of the produced scan

    Returns:
        (scan, cluster truths); truth indices point into the returned scan
    """
    rng = rng if rng is not None else np.random.default_rng(config.rng_seed)

    n_static = int(rng.integers(config.n_static_range[0], config.n_static_range[1] + 1))
    n_clusters = int(rng.integers(config.n_clusters_range[0], config.n_clusters_range[1] + 1))

    static_pos = _uniform_positions(rng, n_static, config.field_extent)
    static_vel = rng.normal(0.0, config.noise_sigma_vel, size=n_static)

    cluster_pos, cluster_vel, truths = [], [], []
    for _ in range(n_clusters):
        points, radial, truth = _moving_cluster(rng, config)
        cluster_pos.append(points)
        cluster_vel.append(radial)
        truths.append(truth)
    moving_pos = np.concatenate(cluster_pos, axis=0) if cluster_pos else np.zeros((0, 2))
    moving_vel = np.concatenate(cluster_vel) if cluster_vel else np.zeros(0)
    n_moving = moving_pos.shape[0]
    moving_pos = moving_pos + rng.normal(0.0, config.noise_sigma_pos, size=moving_pos.shape)
    moving_vel = moving_vel + rng.normal(0.0, config.noise_sigma_vel, size=n_moving)

    if config.clutter_fraction >= 1.0:
        n_clutter = n_static + n_moving
        static_pos, static_vel, n_static = static_pos[:0], static_vel[:0], 0
        moving_pos, moving_vel, n_moving, truths = moving_pos[:0], moving_vel[:0], 0, []
    else:
        n_clutter = int(round(config.clutter_fraction / (1.0 - config.clutter_fraction) * (n_static + n_moving)))
    clutter_pos = _uniform_positions(rng, n_clutter, config.field_extent)
    clutter_vel = config.clutter_scale * rng.standard_t(config.clutter_df, size=n_clutter)

    rcs = np.concatenate([
        rng.normal(*config.rcs_static, size=n_static),
        rng.normal(*config.rcs_moving, size=n_moving),
        rng.normal(*config.rcs_clutter, size=n_clutter),
    ])
    positions = np.concatenate([static_pos, moving_pos, clutter_pos], axis=0)
    velocities = np.concatenate([static_vel, moving_vel, clutter_vel])
    labels = np.concatenate([
        np.full(n_static, STATIC), np.full(n_moving, MOVING), np.full(n_clutter, STATIC),
    ]).astype(np.int64)

    order = rng.permutation(positions.shape[0])
    inverse = np.empty_like(order)
    inverse[order] = np.arange(order.size)

    start = n_static
    for truth, points in zip(truths, cluster_pos):
        truth.indices = np.sort(inverse[start:start + points.shape[0]])
        start += points.shape[0]

    scan = RadarScan(
        positions=positions[order],
        velocities=velocities[order],
        rcs=rcs[order],
        labels=labels[order],
        scan_id=scan_id,
    )
    return scan, truths


def synth_scene(
    config: SynthConfig,
    rng: Optional[np.random.Generator] = None,
    scan_id: str = "synth",
) -> RadarScan:
    """Generate one labeled synthetic scene (see module docstring)."""
    scan, _ = synth_scene_with_truth(config, rng, scan_id)
    return scan


def synth_scenes(config: SynthConfig, count: int, prefix: str = "scan", offset: int = 0) -> List[RadarScan]:
    """
    Generate `count` independent scenes from one base seed.

    Scene i draws from its own child stream of SeedSequence(rng_seed), so
    scene i does not depend on how many scenes are generated.
    """
    children = np.random.SeedSequence(config.rng_seed).spawn(offset + count)[offset:]
    return [
        synth_scene(config, np.random.default_rng(child), scan_id=f"{prefix}_{offset + i:06d}")
        for i, child in enumerate(children)
    ]
