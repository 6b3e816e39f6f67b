import json

import pytest

from common.errors import ConfigError, DataError
from data.dataset import label_histogram, load_dataset, read_split, validate_dataset, write_split
from data.radar_scan import save_scan
from data.radarscenes_adapter import scans_from_detection_table


@pytest.fixture
def dataset_dir(tmp_path, make_scan):
    assignments = {}
    for i, split in enumerate(["train", "train", "val", "test"]):
        scan = make_scan(i, 10 + i, scan_id=f"scan_{i:06d}")
        save_scan(scan, tmp_path / f"{scan.scan_id}.csv")
        assignments[scan.scan_id] = split
    write_split(tmp_path, assignments)
    return tmp_path


def test_split_file_is_sorted_and_grouped(dataset_dir):
    text = (dataset_dir / "split.json").read_text()
    assert list(json.loads(text)) == sorted(json.loads(text))
    assert read_split(dataset_dir) == {
        "train": ["scan_000000", "scan_000001"],
        "val": ["scan_000002"],
        "test": ["scan_000003"],
    }


def test_load_dataset_and_histogram_recount(dataset_dir):
    dataset = load_dataset(dataset_dir)
    assert [s.num_points for s in dataset["train"]] == [10, 11]
    hist = label_histogram(dataset.splits).set_index("split")
    for split, scans in dataset.splits.items():
        assert hist.loc[split, "points"] == sum(s.num_points for s in scans)
        assert hist.loc[split, "moving"] == sum(int(s.labels.sum()) for s in scans)


def test_missing_split_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_dataset(tmp_path)


def test_required_empty_split_is_a_config_error(dataset_dir):
    write_split(dataset_dir, {"scan_000000": "train"})
    with pytest.raises(ConfigError):
        load_dataset(dataset_dir, ("train", "val"), require_nonempty=("train", "val"))


def test_missing_scan_file_is_a_data_error(dataset_dir):
    (dataset_dir / "scan_000002.csv").unlink()
    with pytest.raises(DataError):
        load_dataset(dataset_dir, ("val",))


def test_validation_report_collects_problems(dataset_dir):
    assert validate_dataset(dataset_dir).is_valid
    (dataset_dir / "scan_000001.csv").write_text("x,y,v,rcs,label\n")
    report = validate_dataset(dataset_dir)
    assert not report.is_valid
    bad = [s for s in report.scans if not s.is_valid]
    assert [s.scan_id for s in bad] == ["scan_000001"]
    assert report.to_dict()["is_valid"] is False


@pytest.mark.parametrize("raw", [b"x,y,v,rcs,label\n0,0,\xff,0,0\n", b"x,y,v,rcs,label\n0,0,0\x00,0,0\n"])
def test_validation_reports_binary_garbage_instead_of_raising(dataset_dir, raw):
    (dataset_dir / "scan_000003.csv").write_bytes(raw)
    report = validate_dataset(dataset_dir)
    assert not report.is_valid
    bad = [s for s in report.scans if not s.is_valid]
    assert [s.scan_id for s in bad] == ["scan_000003"]
    assert ":2:" in bad[0].error


def test_detection_table_adapter_groups_frames_and_maps_labels(tmp_path):
    path = tmp_path / "detections.csv"
    path.write_text(
        "frame,sensor_id,x_cc,y_cc,vr_compensated,rcs,label_id,track_id\n"
        "17,1,10.0,1.0,4.5,2.0,0,b'abc'\n"
        "17,2,12.0,-1.0,0.1,5.0,0,\n"
        "18,1,3.0,3.0,0.0,-3.0,11,\n"
    )
    scans = scans_from_detection_table(path)
    assert [s.scan_id for s in scans] == ["17", "18"]
    assert scans[0].labels.tolist() == [1, 0]
    assert scans[1].labels.tolist() == [0]
    assert scans[0].velocities.tolist() == [4.5, 0.1]


def test_detection_table_without_required_columns(tmp_path):
    path = tmp_path / "detections.csv"
    path.write_text("frame,x_cc\n1,2.0\n")
    with pytest.raises(DataError):
        scans_from_detection_table(path)
