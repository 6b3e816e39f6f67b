"""
Radar scan data model, scan file format, sensor merging, label mapping and
dataset directories.
"""

from data.radar_scan import RadarScan, SensorPose, load_scan, save_scan, merge_sensor_scans, STATIC, MOVING
from data.label_mapping import LabelMapping, load_label_mapping, map_labels
from data.dataset import RadarDataset, load_dataset, validate_dataset, write_split, read_split, label_histogram

__all__ = [
    "RadarScan",
    "SensorPose",
    "load_scan",
    "save_scan",
    "merge_sensor_scans",
    "STATIC",
    "MOVING",
    "LabelMapping",
    "load_label_mapping",
    "map_labels",
    "RadarDataset",
    "load_dataset",
    "validate_dataset",
    "write_split",
    "read_split",
    "label_histogram",
]
