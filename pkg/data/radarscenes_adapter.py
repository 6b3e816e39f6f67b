"""
RadarScenes CSV adapter.

The raw dataset is not bundled and its HDF5 layout is not parsed. Instead,
a per-detection table exported from it is read through this contract:

    column          meaning
    ------          -------
    frame           scan identifier; all detections of one merged scan share it
    sensor_id       radar sensor index (kept for provenance only)
    x_cc, y_cc      detection position in the car coordinate system (m)
    vr_compensated  ego-motion compensated radial velocity (m/s)
    rcs             radar cross section (dBsm)
    label_id        RadarScenes semantic class id
    track_id        object track id; empty for detections without a valid track

Positions are already in the vehicle frame, so merging the four sensors is
a concatenation in table order.
"""

import logging
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd

from common.errors import DataError
from data.label_mapping import LabelMapping, load_label_mapping, map_labels
from data.radar_scan import RadarScan

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ["frame", "sensor_id", "x_cc", "y_cc", "vr_compensated", "rcs", "label_id", "track_id"]


def _track_valid(value) -> bool:
    if pd.isna(value):
        return False
    text = str(value).strip()
    return text not in ("", "b''", "nan")


def scans_from_detection_table(
    csv_path: Union[str, Path],
    mapping: LabelMapping = None,
) -> List[RadarScan]:
    """
    Build one labeled RadarScan per frame of a detection table.

    Args:
        csv_path: Path of the exported detection table
        mapping: Label mapping (default: bundled RadarScenes mapping)

    Returns:
        Scans in order of first appearance of their frame

    Raises:
        DataError: Missing columns
        MappingError: Unknown label id
    """
    mapping = mapping or load_label_mapping()
    table = pd.read_csv(csv_path, dtype={"track_id": str, "frame": str}, keep_default_na=True)
    missing = [c for c in REQUIRED_COLUMNS if c not in table.columns]
    if missing:
        raise DataError(f"{csv_path}: missing columns {missing}")

    scans = []
    for frame, rows in table.groupby("frame", sort=False):
        labels = np.array(
            [map_labels(int(label), _track_valid(track), mapping)
             for label, track in zip(rows["label_id"], rows["track_id"])],
            dtype=np.int64,
        )
        scans.append(RadarScan(
            positions=rows[["x_cc", "y_cc"]].to_numpy(dtype=np.float64),
            velocities=rows["vr_compensated"].to_numpy(dtype=np.float64),
            rcs=rows["rcs"].to_numpy(dtype=np.float64),
            labels=labels,
            scan_id=str(frame),
        ))
    logger.info(f"Read {len(scans)} scans from {csv_path}")
    return scans
