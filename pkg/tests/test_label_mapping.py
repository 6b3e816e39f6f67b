import pytest

from common.errors import MappingError
from data.label_mapping import load_label_mapping, map_labels
from data.radar_scan import MOVING, STATIC


@pytest.fixture(scope="module")
def mapping():
    return load_label_mapping()


def test_dynamic_class_on_valid_track_is_moving(mapping):
    assert map_labels(0, True, mapping) == MOVING
    assert map_labels("pedestrian", True, mapping) == MOVING


def test_dynamic_class_without_track_is_static(mapping):
    assert map_labels(0, False, mapping) == STATIC


def test_static_class_is_never_moving(mapping):
    assert map_labels(11, True, mapping) == STATIC
    assert map_labels(11, False, mapping) == STATIC


def test_unknown_label_raises(mapping):
    with pytest.raises(MappingError):
        map_labels(42, True, mapping)
    with pytest.raises(MappingError):
        map_labels("spaceship", True, mapping)
