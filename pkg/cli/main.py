"""
velo-attn command line.

Subcommands:
    synth     write a synthetic dataset directory (scan CSVs + split.json)
    train     train a model, write the best checkpoint and per-epoch metrics
    eval      evaluate a checkpoint on one split
    baseline  tune the velocity threshold on one split, evaluate on another
    infer     label one scan CSV with a checkpoint (appends a `pred` column)
    bench     latency benchmark of a checkpoint
    check     compare a finished run with the tuned baseline (exit 5 on failure)

Exit codes: 0 success, 2 configuration error, 3 data/IO error,
4 numeric failure, 5 acceptance check failed.

Usage:
    python -m cli synth --preset tiny --data-dir data/synth --seed 7
    python -m cli train --preset tiny --data-dir data/synth --out-dir runs/tiny
    python -m cli baseline --data-dir data/synth --out-dir runs/tiny
    python -m cli eval --checkpoint runs/tiny/model.ckpt --split test
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from cli.config import PRESETS, RunConfig, echo_config, resolve_run_config
from common.errors import AcceptanceError, ConfigError, VeloAttnError
from common.logging_setup import configure_logging
from data.dataset import SPLITS, label_histogram, load_dataset, validate_dataset, write_split
from data.radar_scan import load_scan, save_scan
from evaluation.acceptance import LEARNING_SIGNAL_MARGIN, evaluate_acceptance
from evaluation.evaluate_strategies import evaluate_strategy
from evaluation.latency import benchmark_latency
from evaluation.plots import plot_threshold_curve, plot_training_curves
from models.backbone.frozen_model import FrozenVelocityTransformer
from models.backbone.radar_velocity_transformer import build_model, count_parameters
from numerics.checkpoint import save_checkpoint
from numerics.optim import ParamStore
from numerics.precision import set_precision
from simulation.synth_scene import synth_scenes
from strategies.model_strategy import ModelStrategy
from strategies.threshold_baseline import ThresholdStrategy, tune_threshold
from training.trainer import train

logger = logging.getLogger(__name__)

CHECKPOINT_NAME = "model.ckpt"
METRICS_NAME = "metrics.jsonl"


def _write_json(payload: Dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def _checkpoint_path(config: RunConfig) -> Path:
    if config.paths.checkpoint:
        return Path(config.paths.checkpoint)
    return Path(config.paths.out_dir) / CHECKPOINT_NAME


def cmd_synth(config: RunConfig) -> Path:
    """
    Write n_train/n_val/n_test synthetic scans and split.json.

    The dataset directory holds nothing else; config.json and
    label_histogram.csv go to the output directory.
    """
    data_dir = Path(config.data.data_dir)
    out_dir = Path(config.paths.out_dir)
    data_dir.mkdir(parents=True, exist_ok=True)

    counts = {"train": config.data.n_train, "val": config.data.n_val, "test": config.data.n_test}
    assignments: Dict[str, str] = {}
    offset = 0
    for split in SPLITS:
        scans = synth_scenes(config.synth, counts[split], prefix="scan", offset=offset)
        offset += counts[split]
        for scan in scans:
            save_scan(scan, data_dir / f"{scan.scan_id}.csv")
            assignments[scan.scan_id] = split
    write_split(data_dir, assignments)
    echo_config(config, out_dir)

    report = validate_dataset(data_dir)
    if not report.is_valid:
        raise ConfigError(f"Generated dataset failed validation: {report.errors[:3]}")
    histogram = label_histogram(load_dataset(data_dir).splits)
    histogram.to_csv(out_dir / "label_histogram.csv", index=False)

    print(f"✅ Synthetic dataset written to: {data_dir}")
    print(f"   Label histogram: {out_dir / 'label_histogram.csv'}")
    print(histogram.to_string(index=False))
    return data_dir


def cmd_train(config: RunConfig) -> Path:
    """Train on the train split, select on val, write checkpoint + metrics."""
    out_dir = Path(config.paths.out_dir)
    report = validate_dataset(config.data.data_dir)
    if not report.is_valid:
        raise ConfigError(f"Dataset {config.data.data_dir} is invalid: {(report.errors or ['bad scans'])[:3]}")
    dataset = load_dataset(config.data.data_dir, ("train", "val"), require_nonempty=("train", "val"))
    echo_config(config, out_dir)

    model = build_model(config.model, seed=config.train.rng_seed)
    logger.info(f"Model: {count_parameters(model):,} parameters, precision {config.precision}")
    result = train(model, dataset["train"], dataset["val"], config.train, metrics_path=out_dir / METRICS_NAME)

    ckpt = save_checkpoint(
        out_dir / CHECKPOINT_NAME,
        ParamStore.from_module(model),
        config.model.to_dict(),
        extra={"best_epoch": result.best_epoch, "best_val_iou": result.best_val_iou},
    )
    plot_training_curves([vars(m) for m in result.metrics], out_dir / "training_curves.png", result.best_epoch)

    print(f"✅ Best validation IoU {result.best_val_iou:.4f} at epoch {result.best_epoch + 1}")
    print(f"   Checkpoint: {ckpt}")
    print(f"   Metrics:    {out_dir / METRICS_NAME}")
    return ckpt


def cmd_eval(config: RunConfig, split: str) -> Path:
    out_dir = Path(config.paths.out_dir)
    strategy = ModelStrategy.from_checkpoint(_checkpoint_path(config))
    scans = load_dataset(config.data.data_dir, (split,), require_nonempty=(split,))[split]
    report = evaluate_strategy(strategy, scans, split=split, workers=config.workers)
    path = report.save(out_dir / f"eval_{split}.json")

    print(f"✅ IoU (moving) on {split}: {report.iou_moving:.4f}")
    print(f"   Report: {path}")
    return path


def cmd_baseline(config: RunConfig, tune_split: str, eval_split: str) -> Path:
    out_dir = Path(config.paths.out_dir)
    dataset = load_dataset(config.data.data_dir, (tune_split, eval_split), require_nonempty=(tune_split, eval_split))

    t_star, curve = tune_threshold(dataset[tune_split])
    out_dir.mkdir(parents=True, exist_ok=True)
    curve.to_csv(out_dir / "threshold_curve.csv", index=False)
    plot_threshold_curve(curve, t_star, out_dir / "threshold_curve.png")

    report = evaluate_strategy(ThresholdStrategy(t_star), dataset[eval_split], split=eval_split, workers=config.workers)
    payload = report.to_dict()
    payload.update({"threshold": t_star, "tune_split": tune_split})
    path = _write_json(payload, out_dir / f"baseline_{eval_split}.json")

    print(f"✅ Tuned threshold t* = {t_star:.2f} m/s on {tune_split}")
    print(f"   IoU (moving) on {eval_split}: {report.iou_moving:.4f}")
    print(f"   Report: {path}")
    return path


def cmd_infer(config: RunConfig, scan_path: Path, output: Optional[Path]) -> Path:
    model = FrozenVelocityTransformer.from_checkpoint(_checkpoint_path(config))
    scan = load_scan(scan_path)
    labels = model.predict(scan)

    output = save_scan(scan, output or Path(config.paths.out_dir) / f"{scan.scan_id}_pred.csv", predictions=labels)

    print(f"✅ {int(labels.sum())}/{scan.num_points} points labeled moving")
    print(f"   Output: {output}")
    return output


def cmd_bench(config: RunConfig, split: str, n_scans: int, repetitions: int, warmup: int) -> Path:
    out_dir = Path(config.paths.out_dir)
    model = FrozenVelocityTransformer.from_checkpoint(_checkpoint_path(config))
    if n_scans > 0:
        scans = synth_scenes(config.synth, n_scans, prefix="bench")
    else:
        scans = load_dataset(config.data.data_dir, (split,), require_nonempty=(split,))[split]

    report = benchmark_latency(model, scans, repetitions=repetitions, warmup=warmup)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.to_frame().to_csv(out_dir / "latency.csv", index=False)
    path = _write_json(report.to_dict(), out_dir / "latency.json")

    for line in report.summary_lines():
        print(line)
    print(f"   Report: {path}")
    return path


def cmd_check(config: RunConfig, margin: float) -> Path:
    """Learning-signal and overfit checks over the reports in --out-dir."""
    out_dir = Path(config.paths.out_dir)
    report = evaluate_acceptance(out_dir, margin)
    path = _write_json(report.to_dict(), out_dir / "acceptance.json")
    if not report.passed:
        raise AcceptanceError("; ".join(report.failures))

    print(f"✅ Model test IoU {report.model_test_iou:.4f} >= baseline {report.baseline_test_iou:.4f} + {margin:.2f}")
    print(f"   Train IoU {report.model_train_iou:.4f} >= test IoU")
    print(f"   Report: {path}")
    return path


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="JSON run config")
    parser.add_argument("--preset", choices=sorted(PRESETS), default=None, help="Config preset")
    parser.add_argument("--data-dir", default=None, help="Dataset directory")
    parser.add_argument("--out-dir", default=None, help="Output directory")
    parser.add_argument("--seed", type=int, default=None, help="Random seed")
    parser.add_argument("--precision", choices=["single", "double"], default=None,
                        help="Numeric precision (default: $VELO_ATTN_PRECISION or single)")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads for evaluation")
    parser.add_argument("--log-level", default="INFO", help="Logging level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="velo-attn", description="Radar moving object segmentation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="Write a synthetic dataset")
    _add_common(p)
    p.add_argument("--n-train", type=int, default=None)
    p.add_argument("--n-val", type=int, default=None)
    p.add_argument("--n-test", type=int, default=None)
    p.add_argument("--clutter-fraction", type=float, default=None)
    p.add_argument("--noise-sigma-vel", type=float, default=None)

    p = sub.add_parser("train", help="Train a model")
    _add_common(p)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--batch", type=int, default=None)
    p.add_argument("--weight-decay", type=float, default=None)

    p = sub.add_parser("eval", help="Evaluate a checkpoint")
    _add_common(p)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--split", choices=SPLITS, default="test")

    p = sub.add_parser("baseline", help="Tune and evaluate the velocity threshold baseline")
    _add_common(p)
    p.add_argument("--tune-split", choices=SPLITS, default="val")
    p.add_argument("--eval-split", choices=SPLITS, default="test")

    p = sub.add_parser("infer", help="Label one scan CSV")
    _add_common(p)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--scan", type=Path, required=True)
    p.add_argument("--output", type=Path, default=None)

    p = sub.add_parser("bench", help="Latency benchmark")
    _add_common(p)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--split", choices=SPLITS, default="test")
    p.add_argument("--n-scans", type=int, default=0, help="Benchmark on N fresh synthetic scans instead of a split")
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--warmup", type=int, default=3)

    p = sub.add_parser("check", help="Compare a finished run against the baseline")
    _add_common(p)
    p.add_argument("--margin", type=float, default=LEARNING_SIGNAL_MARGIN)
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    get = lambda name: getattr(args, name, None)  # noqa: E731
    seed = get("seed")
    return {
        "data.data_dir": get("data_dir"),
        "paths.out_dir": get("out_dir"),
        "paths.checkpoint": get("checkpoint"),
        "precision": get("precision"),
        "workers": get("workers"),
        "synth.rng_seed": seed,
        "train.rng_seed": seed,
        "data.n_train": get("n_train"),
        "data.n_val": get("n_val"),
        "data.n_test": get("n_test"),
        "synth.clutter_fraction": get("clutter_fraction"),
        "synth.noise_sigma_vel": get("noise_sigma_vel"),
        "train.epochs": get("epochs"),
        "train.lr0": get("lr"),
        "train.batch_size": get("batch"),
        "train.weight_decay": get("weight_decay"),
    }


def run(args: argparse.Namespace) -> None:
    config = resolve_run_config(args.config, args.preset, _overrides(args))
    set_precision(config.precision)

    if args.command == "synth":
        cmd_synth(config)
    elif args.command == "train":
        cmd_train(config)
    elif args.command == "eval":
        cmd_eval(config, args.split)
    elif args.command == "baseline":
        cmd_baseline(config, args.tune_split, args.eval_split)
    elif args.command == "infer":
        cmd_infer(config, args.scan, args.output)
    elif args.command == "bench":
        cmd_bench(config, args.split, args.n_scans, args.repetitions, args.warmup)
    elif args.command == "check":
        cmd_check(config, args.margin)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level.upper())
    try:
        run(args)
    except VeloAttnError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
