"""
Synthetic radar scenes and training-time augmentation.

Modules:
    synth_scene: Labeled scene generator (static, moving clusters, clutter)
    augmentation: Instance copy, rotation, scaling and jitter of labeled scans
"""

from simulation.augmentation import AugConfig, augment, copy_instance, moving_clusters
from simulation.synth_scene import (
    ClusterTruth,
    SynthConfig,
    synth_scene,
    synth_scene_with_truth,
    synth_scenes,
)

__all__ = [
    "AugConfig",
    "augment",
    "copy_instance",
    "moving_clusters",
    "ClusterTruth",
    "SynthConfig",
    "synth_scene",
    "synth_scene_with_truth",
    "synth_scenes",
]
