"""
Evaluation Plotting

Threshold-baseline IoU curve and per-epoch training curves.

EVALUATION ONLY.
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from strategies.threshold_baseline import REFERENCE_THRESHOLD  # noqa: E402

logger = logging.getLogger(__name__)


def plot_threshold_curve(
    curve: pd.DataFrame,
    t_star: float,
    output_path: Union[str, Path],
    title: str = "Velocity threshold baseline",
) -> Path:
    """
    Plot pooled moving IoU against the threshold t.

    Args:
        curve: DataFrame with columns threshold, iou (from tune_threshold)
        t_star: Tuned threshold, marked on the plot
        output_path: Destination image path
    """
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(10, 6))
    ax.plot(curve["threshold"], curve["iou"], color="blue", linewidth=2, label="IoU (moving)")
    ax.axvline(t_star, color="red", linestyle="-", label=f"t* = {t_star:.2f} m/s")
    ax.axvline(REFERENCE_THRESHOLD, color="gray", linestyle="--", alpha=0.8,
               label=f"reference t = {REFERENCE_THRESHOLD:.2f} m/s")

    ax.set_title(title, fontsize=14)
    ax.set_xlabel("Threshold |v| > t (m/s)", fontsize=12)
    ax.set_ylabel("IoU (moving)", fontsize=12)
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, linestyle="--", alpha=0.6)
    ax.legend(loc="best", fontsize=10)
    fig.tight_layout()

    fig.savefig(output_path, dpi=150)
    plt.close(fig)
    logger.info(f"Plot saved to: {output_path}")
    return output_path


def plot_training_curves(metrics: List[dict], output_path: Union[str, Path], best_epoch: Optional[int] = None) -> Path:
    """Train loss and validation IoU per epoch, side by side."""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(metrics)
    epochs = frame["epoch"] + 1

    fig, (ax_loss, ax_iou) = plt.subplots(1, 2, figsize=(12, 5))
    ax_loss.plot(epochs, frame["train_loss"], color="brown", marker="o")
    ax_loss.set_xlabel("Epoch")
    ax_loss.set_ylabel("Train loss")
    ax_iou.plot(epochs, frame["val_iou"], color="green", marker="s")
    ax_iou.set_xlabel("Epoch")
    ax_iou.set_ylabel("Validation IoU (moving)")
    if best_epoch is not None and best_epoch >= 0:
        ax_iou.axvline(best_epoch + 1, color="red", linestyle="--", label="best")
        ax_iou.legend(loc="best")
    for ax in (ax_loss, ax_iou):
        ax.grid(True, linestyle="--", alpha=0.6)
    fig.tight_layout()

    fig.savefig(output_path, dpi=150)
    plt.close(fig)
    logger.info(f"Plot saved to: {output_path}")
    return output_path
