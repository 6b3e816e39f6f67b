import numpy as np
import pytest

from common.errors import ArgumentError
from evaluation.evaluate_strategies import compare_strategies, evaluate_strategy
from evaluation.latency import SENSOR_FRAME_PERIOD_S, benchmark_latency
from evaluation.plots import plot_threshold_curve, plot_training_curves
from models.backbone.frozen_model import FrozenVelocityTransformer
from models.backbone.radar_velocity_transformer import ModelConfig, build_model, predict
from simulation.synth_scene import SynthConfig, synth_scenes
from strategies.model_strategy import ModelStrategy
from strategies.threshold_baseline import ThresholdStrategy, tune_threshold

TINY = ModelConfig(stage_channels=[8, 16], n_vtl=4, n_tus=3, k_ds=4)


@pytest.fixture(scope="module")
def scans():
    return synth_scenes(SynthConfig(n_static_range=(20, 40), rng_seed=5), 6)


def test_threaded_evaluation_matches_sequential(scans):
    strategy = ThresholdStrategy(0.5)
    sequential = evaluate_strategy(strategy, scans, workers=1)
    threaded = evaluate_strategy(strategy, scans, workers=3)
    assert sequential.counts == threaded.counts
    assert len(threaded.latencies) == len(scans)
    assert sequential.counts.total == sum(s.num_points for s in scans)


def test_evaluation_rejects_empty_split():
    with pytest.raises(ArgumentError):
        evaluate_strategy(ThresholdStrategy(0.5), [])


def test_model_strategy_agrees_with_predict(scans):
    model = build_model(TINY)
    strategy = ModelStrategy(FrozenVelocityTransformer(build_model(TINY)))
    for scan in scans[:2]:
        assert np.array_equal(strategy(scan), predict(model, scan))


def test_frozen_model_probabilities(scans):
    frozen = FrozenVelocityTransformer(build_model(TINY))
    prob, labels = frozen.predict_scan(scans[0])
    assert prob.shape == (scans[0].num_points,)
    assert ((prob >= 0) & (prob <= 1)).all()
    assert labels.dtype == np.int64 and set(labels.tolist()) <= {0, 1}
    assert not any(p.requires_grad for p in frozen.model.parameters())


def test_compare_strategies_table(scans):
    reports, table = compare_strategies([ThresholdStrategy(0.0), ThresholdStrategy(1.0)], scans)
    assert len(reports) == 2
    assert list(table["iou_moving"]) == [r.iou_moving for r in reports]
    assert {"tp", "fp", "fn", "tn"} <= set(table.columns)


def test_latency_report(scans):
    model = build_model(TINY)
    report = benchmark_latency(model, scans[:3], repetitions=2, warmup=1)
    assert len(report.samples) == 6
    assert report.num_points == [s.num_points for s in scans[:3] for _ in range(2)]
    assert report.minimum <= report.median <= report.maximum
    data = report.to_dict()
    assert data["sensor_frame_period_s"] == pytest.approx(SENSOR_FRAME_PERIOD_S)
    assert len(report.to_frame()) == 6


def test_latency_accepts_callables_and_validates(scans):
    calls = []
    report = benchmark_latency(calls.append, scans[:2], repetitions=1, warmup=0)
    assert len(calls) == 2 and len(report.samples) == 2
    with pytest.raises(ArgumentError):
        benchmark_latency(calls.append, [])
    with pytest.raises(ArgumentError):
        benchmark_latency(calls.append, scans, repetitions=0)


def test_plots_are_written(scans, tmp_path):
    t_star, curve = tune_threshold(scans)
    path = plot_threshold_curve(curve, t_star, tmp_path / "plots" / "curve.png")
    assert path.exists() and path.stat().st_size > 0

    metrics = [
        {"epoch": 0, "lr": 1e-3, "train_loss": 1.2, "val_iou": 0.3},
        {"epoch": 1, "lr": 5e-4, "train_loss": 0.9, "val_iou": 0.5},
    ]
    path = plot_training_curves(metrics, tmp_path / "train.png", best_epoch=1)
    assert path.exists() and path.stat().st_size > 0
