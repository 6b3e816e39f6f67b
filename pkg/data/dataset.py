"""
Dataset directory: scan CSVs plus split.json.

Layout:
    dataset_dir/
        ├── scan_000000.csv
        ├── scan_000001.csv
        ├── ...
        └── split.json        {"scan_000000": "train", "scan_000001": "val", ...}

Validation produces machine-readable reports (dataclasses -> JSON) so a
bad dataset is rejected before any training starts.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import pandas as pd

from common.errors import ConfigError, DataError
from data.radar_scan import RadarScan, load_scan

logger = logging.getLogger(__name__)

SPLIT_FILE = "split.json"
SPLITS = ("train", "val", "test")


@dataclass
class ScanValidation:
    """Validation result for a single scan file."""
    scan_id: str
    path: str
    exists: bool
    num_points: int = 0
    num_moving: int = 0
    is_valid: bool = False
    error: Optional[str] = None


@dataclass
class DatasetValidation:
    """Complete dataset validation result."""
    data_dir: str
    split_counts: Dict[str, int]
    scans: List[ScanValidation] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.errors and all(s.is_valid for s in self.scans)

    def to_dict(self) -> Dict:
        report = asdict(self)
        report["is_valid"] = self.is_valid
        return report


@dataclass
class RadarDataset:
    """Scans grouped by split name."""
    root: Path
    splits: Dict[str, List[RadarScan]]

    def __getitem__(self, split: str) -> List[RadarScan]:
        if split not in self.splits:
            raise ConfigError(f"Split '{split}' not loaded from {self.root}")
        return self.splits[split]


def write_split(data_dir: Union[str, Path], assignments: Dict[str, str]) -> Path:
    """Write split.json (keys sorted, so the file is reproducible)."""
    for scan_id, split in assignments.items():
        if split not in SPLITS:
            raise ConfigError(f"Scan '{scan_id}' assigned to unknown split '{split}'")
    path = Path(data_dir) / SPLIT_FILE
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(assignments, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def read_split(data_dir: Union[str, Path]) -> Dict[str, List[str]]:
    """
    Read split.json into split -> sorted scan ids.

    Raises:
        ConfigError: If split.json is missing or malformed
    """
    path = Path(data_dir) / SPLIT_FILE
    if not path.exists():
        raise ConfigError(f"Missing {SPLIT_FILE} in {data_dir}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            assignments = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Malformed {path}: {exc}") from exc

    grouped: Dict[str, List[str]] = {split: [] for split in SPLITS}
    for scan_id, split in assignments.items():
        if split not in grouped:
            raise ConfigError(f"Scan '{scan_id}' assigned to unknown split '{split}' in {path}")
        grouped[split].append(scan_id)
    return {split: sorted(ids) for split, ids in grouped.items()}


def load_dataset(
    data_dir: Union[str, Path],
    splits: Sequence[str] = SPLITS,
    require_nonempty: Iterable[str] = (),
) -> RadarDataset:
    """
    Load the requested splits of a dataset directory.

    Args:
        data_dir: Dataset directory
        splits: Splits to load
        require_nonempty: Splits that must contain at least one scan

    Raises:
        ConfigError: Missing split.json or a required split is empty
        DataError: A scan file is missing or invalid
    """
    root = Path(data_dir)
    grouped = read_split(root)
    loaded: Dict[str, List[RadarScan]] = {}
    for split in splits:
        ids = grouped.get(split, [])
        if split in require_nonempty and not ids:
            raise ConfigError(f"Split '{split}' is empty in {root}")
        scans = []
        for scan_id in ids:
            path = root / f"{scan_id}.csv"
            if not path.exists():
                raise DataError(f"Scan file missing: {path}")
            scans.append(load_scan(path))
        loaded[split] = scans
        logger.info(f"Loaded split '{split}': {len(scans)} scans")
    return RadarDataset(root=root, splits=loaded)


def validate_dataset(data_dir: Union[str, Path]) -> DatasetValidation:
    """
    Validate every scan listed in split.json.

    Never raises for bad scans; problems are report entries.
    """
    root = Path(data_dir)
    try:
        grouped = read_split(root)
    except ConfigError as exc:
        return DatasetValidation(data_dir=str(root), split_counts={}, errors=[str(exc)])

    report = DatasetValidation(
        data_dir=str(root),
        split_counts={split: len(ids) for split, ids in grouped.items()},
    )
    for split in SPLITS:
        for scan_id in grouped[split]:
            path = root / f"{scan_id}.csv"
            entry = ScanValidation(scan_id=scan_id, path=str(path), exists=path.exists())
            if not entry.exists:
                entry.error = "File does not exist"
            else:
                try:
                    scan = load_scan(path)
                    entry.num_points = scan.num_points
                    entry.num_moving = int(scan.labels.sum()) if scan.is_labeled else 0
                    entry.is_valid = True
                except (DataError, OSError) as exc:
                    entry.error = str(exc)
            report.scans.append(entry)

    listed = {s.scan_id for s in report.scans}
    orphans = sorted(p.stem for p in root.glob("*.csv") if p.stem not in listed)
    if orphans:
        logger.warning(f"{len(orphans)} scan files not listed in {SPLIT_FILE} (e.g. {orphans[0]})")
    return report


def label_histogram(scans_by_split: Dict[str, List[RadarScan]]) -> pd.DataFrame:
    """Static/moving point counts per split."""
    rows = []
    for split, scans in scans_by_split.items():
        labeled = [s for s in scans if s.is_labeled]
        moving = int(sum(int(s.labels.sum()) for s in labeled))
        total = int(sum(s.num_points for s in labeled))
        rows.append({
            "split": split,
            "scans": len(scans),
            "points": total,
            "static": total - moving,
            "moving": moving,
            "moving_fraction": moving / total if total else 0.0,
        })
    return pd.DataFrame(rows, columns=["split", "scans", "points", "static", "moving", "moving_fraction"])
