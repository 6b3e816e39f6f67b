import math

import numpy as np
import pytest

from common.errors import ConfigError
from data.radar_scan import MOVING, STATIC
from simulation.synth_scene import SynthConfig, synth_scene, synth_scene_with_truth, synth_scenes


def test_same_seed_gives_identical_scenes():
    config = SynthConfig(rng_seed=11)
    assert synth_scene(config).equals(synth_scene(config))
    assert not synth_scene(config).equals(synth_scene(SynthConfig(rng_seed=12)))


def test_noiseless_cluster_reads_radial_component_exactly():
    config = SynthConfig(
        n_clusters_range=(1, 1), cluster_speed_range=(5.0, 5.0), clutter_fraction=0.0,
        noise_sigma_vel=0.0, noise_sigma_pos=0.0, rng_seed=3,
    )
    scan, truths = synth_scene_with_truth(config)
    (truth,) = truths
    moving = np.flatnonzero(scan.labels == MOVING)
    assert np.array_equal(moving, truth.indices)
    heading = np.array([math.cos(truth.heading), math.sin(truth.heading)])
    for i in moving:
        p = scan.positions[i]
        expected = 5.0 * abs(p @ heading) / np.linalg.norm(p)
        assert abs(abs(scan.velocities[i]) - expected) < 1e-12
    assert np.all(scan.velocities[scan.labels == STATIC] == 0.0)


def test_clutter_count_follows_fraction():
    config = SynthConfig(n_static_range=(110, 110), n_clusters_range=(2, 2),
                         points_per_cluster_range=(5, 5), clutter_fraction=0.2, rng_seed=0)
    scan = synth_scene(config)
    # 120 signal points, clutter = round(0.25 * 120)
    assert scan.num_points == 120 + 30
    assert int(scan.labels.sum()) == 10


def test_min_radial_speed_is_respected():
    config = SynthConfig(min_radial_speed=1.0, noise_sigma_vel=0.0, clutter_fraction=0.0, rng_seed=5)
    for i in range(20):
        scan = synth_scene(config, np.random.default_rng(i))
        assert np.all(np.abs(scan.velocities[scan.labels == MOVING]) >= 1.0)


def test_pooled_moving_fraction_matches_expectation():
    config = SynthConfig(rng_seed=21)
    scans = synth_scenes(config, 1000)
    moving = sum(int(s.labels.sum()) for s in scans)
    total = sum(s.num_points for s in scans)
    expected = config.expected_moving_fraction()
    assert abs(moving / total - expected) <= 0.1 * expected


def test_scene_streams_do_not_depend_on_count():
    config = SynthConfig(rng_seed=9)
    few = synth_scenes(config, 2)
    more = synth_scenes(config, 5)
    assert few[1].equals(more[1])
    assert more[3].equals(synth_scenes(config, 2, offset=3)[0])
    assert more[3].scan_id == "scan_000003"


@pytest.mark.parametrize("kwargs", [
    {"n_static_range": (10, 5)},
    {"clutter_fraction": 1.5},
    {"noise_sigma_vel": -1.0},
    {"n_static_range": (0, 0), "n_clusters_range": (0, 0)},
])
def test_invalid_configs_are_rejected(kwargs):
    with pytest.raises(ConfigError):
        SynthConfig(**kwargs)
