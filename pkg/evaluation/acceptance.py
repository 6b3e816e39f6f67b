"""
Acceptance Checks on a Finished Run

Reads the JSON reports a pipeline run leaves in its output directory and
checks two result criteria:

    1. learning signal: the model's test IoU beats the tuned velocity
       threshold's test IoU by at least LEARNING_SIGNAL_MARGIN
    2. overfit sanity: the model's IoU on its own training split is at
       least its test IoU

Inputs (all under the run's output directory):
    eval_test.json, eval_train.json   written by `eval`
    baseline_test.json                written by `baseline`

EVALUATION ONLY - Reads reports, never runs a model.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Union

from common.errors import DataError

logger = logging.getLogger(__name__)

# Absolute moving-class IoU margin over the tuned threshold, fixed for the
# tiny preset on the default noisy synthetic scenes.
LEARNING_SIGNAL_MARGIN = 0.02


@dataclass
class AcceptanceReport:
    model_test_iou: float
    model_train_iou: float
    baseline_test_iou: float
    margin: float
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict:
        payload = asdict(self)
        payload["passed"] = self.passed
        return payload


def _read_iou(path: Path) -> float:
    if not path.exists():
        raise DataError(f"Missing report: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return float(json.load(f)["iou_moving"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DataError(f"Malformed report {path}: {e}") from e


def evaluate_acceptance(out_dir: Union[str, Path], margin: float = LEARNING_SIGNAL_MARGIN) -> AcceptanceReport:
    """
    Compare the run's reports against the acceptance criteria.

    Raises:
        DataError: A report is missing or has no `iou_moving`
    """
    out_dir = Path(out_dir)
    report = AcceptanceReport(
        model_test_iou=_read_iou(out_dir / "eval_test.json"),
        model_train_iou=_read_iou(out_dir / "eval_train.json"),
        baseline_test_iou=_read_iou(out_dir / "baseline_test.json"),
        margin=margin,
    )
    if report.model_test_iou < report.baseline_test_iou + margin:
        report.failures.append(
            f"model test IoU {report.model_test_iou:.4f} does not beat baseline "
            f"{report.baseline_test_iou:.4f} by {margin:.2f}"
        )
    if report.model_train_iou < report.model_test_iou:
        report.failures.append(
            f"train IoU {report.model_train_iou:.4f} below test IoU {report.model_test_iou:.4f}"
        )
    for failure in report.failures:
        logger.warning(f"Acceptance: {failure}")
    return report

