"""
Radar scan data model and scan file format.

A RadarScan is one merged radar measurement in the vehicle frame
(x forward, y left): per-point 2D position, ego-motion compensated Doppler
velocity, radar cross section and an optional moving/static label.

Scan CSV format:
    - UTF-8, LF line endings
    - header `x,y,v,rcs,label` (labeled) or `x,y,v,rcs` (unlabeled)
    - one point per row; floats written in shortest round-trip form,
      so save -> load reproduces every value bit-exactly
"""

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from common.errors import ArgumentError, DataError, ParseError

LABELED_HEADER = ["x", "y", "v", "rcs", "label"]
UNLABELED_HEADER = ["x", "y", "v", "rcs"]

STATIC = 0
MOVING = 1


@dataclass
class RadarScan:
    """
    One radar scan.

    Attributes:
        positions: (N, 2) float64, meters, vehicle frame
        velocities: (N,) float64, m/s, ego-motion compensated Doppler
        rcs: (N,) float64, dBsm
        labels: Optional (N,) int64 in {0 static, 1 moving}
        scan_id: Identifier (file stem for loaded scans)
    """

    positions: np.ndarray
    velocities: np.ndarray
    rcs: np.ndarray
    labels: Optional[np.ndarray] = None
    scan_id: str = "scan"

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1, 2)
        self.velocities = np.asarray(self.velocities, dtype=np.float64).reshape(-1)
        self.rcs = np.asarray(self.rcs, dtype=np.float64).reshape(-1)
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        self.validate()

    @property
    def num_points(self) -> int:
        return int(self.positions.shape[0])

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def validate(self) -> None:
        """
        Check the data-model invariants.

        Raises:
            DataError: On empty scans, length mismatches, non-finite values
                       or labels outside {0, 1}
        """
        n = self.positions.shape[0]
        if n < 1:
            raise DataError(f"empty scan '{self.scan_id}'")
        if self.velocities.shape[0] != n or self.rcs.shape[0] != n:
            raise DataError(
                f"length mismatch in scan '{self.scan_id}': positions {n}, "
                f"velocities {self.velocities.shape[0]}, rcs {self.rcs.shape[0]}"
            )
        if self.labels is not None:
            if self.labels.shape[0] != n:
                raise DataError(f"length mismatch in scan '{self.scan_id}': labels {self.labels.shape[0]} vs {n}")
            if not np.isin(self.labels, (STATIC, MOVING)).all():
                raise DataError(f"labels outside {{0, 1}} in scan '{self.scan_id}'")
        for name, values in (("positions", self.positions), ("velocities", self.velocities), ("rcs", self.rcs)):
            if not np.isfinite(values).all():
                raise DataError(f"non-finite {name} in scan '{self.scan_id}'")

    def attributes(self) -> np.ndarray:
        """Per-point (x, y, v, rcs) rows, the lexicographic tie-break key."""
        return np.column_stack([self.positions, self.velocities, self.rcs])

    def subset(self, indices: Sequence[int], scan_id: Optional[str] = None) -> "RadarScan":
        indices = np.asarray(indices, dtype=np.int64)
        return RadarScan(
            positions=self.positions[indices],
            velocities=self.velocities[indices],
            rcs=self.rcs[indices],
            labels=None if self.labels is None else self.labels[indices],
            scan_id=scan_id or self.scan_id,
        )

    def with_labels(self, labels: Optional[np.ndarray]) -> "RadarScan":
        return RadarScan(self.positions.copy(), self.velocities.copy(), self.rcs.copy(),
                         None if labels is None else np.asarray(labels).copy(), self.scan_id)

    def equals(self, other: "RadarScan") -> bool:
        """Bit-exact equality of all arrays (ids excluded)."""
        same_labels = (
            (self.labels is None and other.labels is None)
            or (self.labels is not None and other.labels is not None
                and np.array_equal(self.labels, other.labels))
        )
        return (
            same_labels
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.velocities, other.velocities)
            and np.array_equal(self.rcs, other.rcs)
        )


@dataclass(frozen=True)
class SensorPose:
    """Rigid 2D transform sensor frame -> vehicle frame."""

    yaw: float = 0.0
    translation: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (math.isfinite(self.yaw) and all(math.isfinite(t) for t in self.translation)):
            raise DataError(f"non-finite sensor pose {self}")

    def rotation_matrix(self) -> np.ndarray:
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return np.array([[c, -s], [s, c]], dtype=np.float64)

    def apply(self, positions: np.ndarray) -> np.ndarray:
        """p' = R(yaw) p + t for every row."""
        return positions @ self.rotation_matrix().T + np.asarray(self.translation, dtype=np.float64)


def _format_float(value: float) -> str:
    return repr(float(value))


def save_scan(scan: RadarScan, path: Union[str, Path], predictions: Optional[np.ndarray] = None) -> Path:
    """
    Write a scan in the CSV format described above.

    Args:
        scan: Scan to write
        path: Destination .csv path (parent directories are created)
        predictions: Optional (N,) labels appended as a trailing `pred` column

    Returns:
        Written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = LABELED_HEADER if scan.is_labeled else UNLABELED_HEADER
    if predictions is not None:
        predictions = np.asarray(predictions).reshape(-1)
        if predictions.shape[0] != scan.num_points:
            raise ArgumentError(f"{predictions.shape[0]} predictions for {scan.num_points} points")
        header = header + ["pred"]

    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for i in range(scan.num_points):
            row = [
                _format_float(scan.positions[i, 0]),
                _format_float(scan.positions[i, 1]),
                _format_float(scan.velocities[i]),
                _format_float(scan.rcs[i]),
            ]
            if scan.is_labeled:
                row.append(str(int(scan.labels[i])))
            if predictions is not None:
                row.append(str(int(predictions[i])))
            writer.writerow(row)
    return path


def _parse_float(text: str, line: int, path: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ParseError(f"not a number: {text!r}", line=line, path=path) from exc
    if not math.isfinite(value):
        raise DataError(f"{path}:{line}: non-finite value {text!r}")
    return value


def _read_rows(raw: bytes, display: str) -> List[List[str]]:
    """Decode UTF-8 bytes and split them into CSV rows; bad bytes are ParseErrors."""
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = raw[:exc.start].count(b"\n") + 1
        raise ParseError(f"invalid UTF-8 byte 0x{raw[exc.start]:02x}", line=line, path=display) from exc

    nul = text.find("\x00")
    if nul >= 0:
        raise ParseError("NUL byte in file", line=text.count("\n", 0, nul) + 1, path=display)

    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        return list(reader)
    except csv.Error as exc:
        raise ParseError(f"malformed CSV: {exc}", line=reader.line_num, path=display) from exc


def load_scan(path: Union[str, Path]) -> RadarScan:
    """
    Read a scan CSV.

    Raises:
        ParseError: Undecodable bytes, unknown header or a row with the
                    wrong field count (message names the line number)
        DataError: Non-finite values, labels outside {0, 1}, or no rows
                   ("empty scan")
    """
    path = Path(path)
    display = str(path)
    rows = _read_rows(path.read_bytes(), display)

    if not rows:
        raise ParseError("missing header", line=1, path=display)
    header = [name.strip() for name in rows[0]]
    if header == LABELED_HEADER:
        labeled = True
    elif header == UNLABELED_HEADER:
        labeled = False
    else:
        raise ParseError(f"unexpected header {rows[0]}", line=1, path=display)

    width = len(header)
    positions: List[Tuple[float, float]] = []
    velocities: List[float] = []
    rcs: List[float] = []
    labels: List[int] = []

    for offset, row in enumerate(rows[1:]):
        line = offset + 2
        if not row:
            continue
        if len(row) != width:
            raise ParseError(f"expected {width} fields, got {len(row)}", line=line, path=display)
        x, y, v, sigma = (_parse_float(row[i], line, display) for i in range(4))
        positions.append((x, y))
        velocities.append(v)
        rcs.append(sigma)
        if labeled:
            try:
                labels.append(int(row[4]))
            except ValueError as exc:
                raise ParseError(f"label is not an integer: {row[4]!r}", line=line, path=display) from exc

    if not positions:
        raise DataError(f"{display}: empty scan")

    return RadarScan(
        positions=np.array(positions, dtype=np.float64),
        velocities=np.array(velocities, dtype=np.float64),
        rcs=np.array(rcs, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64) if labeled else None,
        scan_id=path.stem,
    )


def merge_sensor_scans(scans: Sequence[Tuple[RadarScan, SensorPose]]) -> RadarScan:
    """
    Merge per-sensor scans into one central scan in the vehicle frame.

    Positions are mapped through each sensor's pose; velocities and RCS are
    copied unchanged (compensated Doppler is a scalar). Points keep input
    order, sensor by sensor. Labels survive only if every input is labeled.

    Raises:
        ArgumentError: If `scans` is empty
    """
    if len(scans) == 0:
        raise ArgumentError("merge_sensor_scans needs at least one scan")

    positions = [pose.apply(scan.positions) for scan, pose in scans]
    labeled = all(scan.is_labeled for scan, _ in scans)

    return RadarScan(
        positions=np.concatenate(positions, axis=0),
        velocities=np.concatenate([scan.velocities for scan, _ in scans]),
        rcs=np.concatenate([scan.rcs for scan, _ in scans]),
        labels=np.concatenate([scan.labels for scan, _ in scans]) if labeled else None,
        scan_id="+".join(scan.scan_id for scan, _ in scans),
    )
