import numpy as np
import pytest
from scipy.spatial.distance import pdist

from common.errors import ArgumentError
from data.radar_scan import MOVING, RadarScan
from simulation.augmentation import AugConfig, augment, moving_clusters


def _only(**probabilities) -> AugConfig:
    config = AugConfig.disabled()
    for name, value in probabilities.items():
        setattr(config, name, value)
    return config


def test_rotation_preserves_distances_and_velocities(make_scan):
    scan = make_scan(0, 50)
    out = augment(scan, np.random.default_rng(0), _only(p_rotate=1.0))
    assert np.allclose(pdist(out.positions), pdist(scan.positions), atol=1e-6)
    assert np.array_equal(out.velocities, scan.velocities)
    assert np.array_equal(out.labels, scan.labels)


def test_scaling_stays_in_range(make_scan):
    scan = make_scan(1, 20)
    out = augment(scan, np.random.default_rng(1), _only(p_scale=1.0))
    ratios = np.linalg.norm(out.positions, axis=1) / np.linalg.norm(scan.positions, axis=1)
    assert np.allclose(ratios, ratios[0])
    assert 0.95 <= ratios[0] <= 1.05


def test_disabled_augmentation_is_identity(make_scan):
    scan = make_scan(2, 15)
    assert augment(scan, np.random.default_rng(2), AugConfig.disabled()).equals(scan)


def test_same_rng_state_gives_same_result(make_scan):
    scan = make_scan(3, 30)
    a = augment(scan, np.random.default_rng(7))
    b = augment(scan, np.random.default_rng(7))
    assert a.equals(b)


def test_instance_copy_appends_one_rotated_cluster():
    positions = np.array([[10.0, 0.0], [10.5, 0.0], [11.0, 0.0], [-20.0, 5.0], [0.0, 30.0]])
    scan = RadarScan(positions, np.array([3.0, 3.1, 2.9, 0.0, 0.0]), np.zeros(5),
                     np.array([1, 1, 1, 0, 0]), "s")
    out = augment(scan, np.random.default_rng(0), _only(p_instance=1.0))
    assert out.num_points == 8
    assert np.array_equal(out.labels[5:], [MOVING] * 3)
    assert np.array_equal(out.velocities[5:], scan.velocities[:3])
    assert np.allclose(pdist(out.positions[5:]), pdist(positions[:3]))
    assert np.allclose(np.linalg.norm(out.positions[5:], axis=1), np.linalg.norm(positions[:3], axis=1))


def test_instance_copy_without_moving_points_is_a_no_op(make_scan):
    scan = make_scan(4, 10).with_labels(np.zeros(10, dtype=np.int64))
    out = augment(scan, np.random.default_rng(0), _only(p_instance=1.0))
    assert out.equals(scan)


def test_moving_clusters_links_nearby_points():
    positions = np.array([[0.0, 0.0], [1.0, 0.0], [10.0, 0.0], [50.0, 0.0]])
    scan = RadarScan(positions, np.zeros(4), np.zeros(4), np.array([1, 1, 1, 0]), "s")
    components = moving_clusters(scan, link_radius=2.0)
    assert components[0] == components[1] != components[2]


def test_unlabeled_scan_is_rejected(make_scan):
    with pytest.raises(ArgumentError):
        augment(make_scan(5, 5, labeled=False), np.random.default_rng(0))
