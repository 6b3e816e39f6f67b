import math

import numpy as np
import pytest

from common.errors import ArgumentError, DataError, ParseError
from data.radar_scan import RadarScan, SensorPose, load_scan, merge_sensor_scans, save_scan


def test_save_load_round_trip_is_bit_exact(tmp_path, make_scan):
    scan = make_scan(3, 40, scan_id="scan_000003")
    loaded = load_scan(save_scan(scan, tmp_path / "scan_000003.csv"))
    assert loaded.equals(scan)
    assert loaded.scan_id == "scan_000003"


def test_unlabeled_scan_round_trip(tmp_path, make_scan):
    scan = make_scan(5, 7, labeled=False)
    loaded = load_scan(save_scan(scan, tmp_path / "u.csv"))
    assert not loaded.is_labeled
    assert loaded.equals(scan)


def test_wrong_field_count_names_the_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y,v,rcs,label\n1.0,2.0,0.5,3.0,0\n1.0,2.0,0.5\n")
    with pytest.raises(ParseError) as info:
        load_scan(path)
    assert info.value.line == 3
    assert ":3:" in str(info.value)


def test_undecodable_bytes_are_parse_errors_with_line(tmp_path):
    path = tmp_path / "latin.csv"
    path.write_bytes(b"x,y,v,rcs\n0,0,0,0\n0,0,\xff\xfe,0\n")
    with pytest.raises(ParseError) as info:
        load_scan(path)
    assert info.value.line == 3


def test_nul_byte_is_a_parse_error_with_line(tmp_path):
    path = tmp_path / "nul.csv"
    path.write_bytes(b"x,y,v,rcs\n0,0,\x00,0\n")
    with pytest.raises(ParseError) as info:
        load_scan(path)
    assert info.value.line == 2


def test_header_only_is_an_empty_scan(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("x,y,v,rcs,label\n")
    with pytest.raises(DataError, match="empty scan"):
        load_scan(path)


@pytest.mark.parametrize("body, error", [
    ("x,y,v,rcs,label\n1.0,nan,0.0,1.0,0\n", DataError),
    ("x,y,v,rcs,label\n1.0,2.0,0.0,1.0,2\n", DataError),
    ("a,b,c\n1,2,3\n", ParseError),
    ("x,y,v,rcs\n1.0,abc,0.0,1.0\n", ParseError),
])
def test_invalid_files_are_rejected(tmp_path, body, error):
    path = tmp_path / "scan.csv"
    path.write_text(body)
    with pytest.raises(error):
        load_scan(path)


def test_data_model_invariants():
    with pytest.raises(DataError):
        RadarScan(np.zeros((0, 2)), np.zeros(0), np.zeros(0))
    with pytest.raises(DataError):
        RadarScan(np.zeros((3, 2)), np.zeros(2), np.zeros(3))
    with pytest.raises(DataError):
        RadarScan(np.zeros((1, 2)), np.array([np.inf]), np.zeros(1))


def test_merge_applies_each_sensor_pose():
    a = RadarScan(np.array([[1.0, 0.0]]), np.array([2.0]), np.array([1.0]), np.array([1]), "front")
    b = RadarScan(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([0.0, -1.0]), np.array([0.0, 3.0]),
                  np.array([0, 0]), "left")
    merged = merge_sensor_scans([
        (a, SensorPose(yaw=0.0, translation=(3.0, 0.0))),
        (b, SensorPose(yaw=math.pi / 2, translation=(0.0, 1.0))),
    ])
    assert merged.num_points == 3
    assert np.allclose(merged.positions, [[4.0, 0.0], [0.0, 2.0], [-1.0, 1.0]], atol=1e-12)
    assert np.array_equal(merged.velocities, [2.0, 0.0, -1.0])
    assert np.array_equal(merged.labels, [1, 0, 0])
    assert merged.scan_id == "front+left"


def test_merge_drops_labels_unless_all_inputs_are_labeled(make_scan):
    merged = merge_sensor_scans([
        (make_scan(0, 4), SensorPose()),
        (make_scan(1, 3, labeled=False), SensorPose()),
    ])
    assert merged.num_points == 7
    assert not merged.is_labeled


def test_merge_of_nothing_is_an_argument_error():
    with pytest.raises(ArgumentError):
        merge_sensor_scans([])


def test_predictions_column_is_appended_after_the_scan_fields(tmp_path, make_scan):
    scan = make_scan(4, 5)
    path = save_scan(scan, tmp_path / "pred.csv", predictions=[0, 1, 1, 0, 1])
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,v,rcs,label,pred"
    assert [line.rsplit(",", 1)[1] for line in lines[1:]] == ["0", "1", "1", "0", "1"]
    with pytest.raises(ArgumentError):
        save_scan(scan, tmp_path / "short.csv", predictions=[0, 1])
