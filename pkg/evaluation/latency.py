"""
Inference latency benchmark.

Times one forward pass per scan (wall clock) after a warm-up that is not
recorded. Reports mean/median/p95 next to two reference lines: the 17 Hz
sensor frame period and a 0.012 s mean measured on a data-center GPU.
Nothing is asserted against them.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Union

import numpy as np
import pandas as pd
import torch

from common.errors import ArgumentError
from data.radar_scan import RadarScan

logger = logging.getLogger(__name__)

SENSOR_RATE_HZ = 17.0
SENSOR_FRAME_PERIOD_S = 1.0 / SENSOR_RATE_HZ
REFERENCE_GPU_MEAN_S = 0.012


@dataclass
class LatencyReport:
    samples: List[float] = field(default_factory=list)
    num_points: List[int] = field(default_factory=list)

    def _values(self) -> np.ndarray:
        return np.asarray(self.samples, dtype=np.float64)

    @property
    def mean(self) -> float:
        return float(self._values().mean())

    @property
    def median(self) -> float:
        return float(np.median(self._values()))

    @property
    def p95(self) -> float:
        return float(np.percentile(self._values(), 95))

    @property
    def minimum(self) -> float:
        return float(self._values().min())

    @property
    def maximum(self) -> float:
        return float(self._values().max())

    def to_dict(self) -> Dict:
        return {
            "num_samples": len(self.samples),
            "mean_s": self.mean,
            "median_s": self.median,
            "p95_s": self.p95,
            "min_s": self.minimum,
            "max_s": self.maximum,
            "sensor_frame_period_s": SENSOR_FRAME_PERIOD_S,
            "reference_gpu_mean_s": REFERENCE_GPU_MEAN_S,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"seconds": self.samples, "num_points": self.num_points})

    def summary_lines(self) -> List[str]:
        return [
            f"Latency over {len(self.samples)} forward passes:",
            f"   mean {self.mean * 1e3:.2f} ms | median {self.median * 1e3:.2f} ms | p95 {self.p95 * 1e3:.2f} ms",
            f"   min {self.minimum * 1e3:.2f} ms | max {self.maximum * 1e3:.2f} ms",
            f"   sensor frame period (17 Hz): {SENSOR_FRAME_PERIOD_S * 1e3:.1f} ms",
            f"   reference GPU mean: {REFERENCE_GPU_MEAN_S * 1e3:.1f} ms",
        ]


def _runner(model) -> Callable[[RadarScan], object]:
    if hasattr(model, "logits"):
        return model.logits
    if isinstance(model, torch.nn.Module):
        model.eval()

        def run(scan: RadarScan):
            with torch.no_grad():
                return model(scan)
        return run
    if callable(model):
        return model
    raise ArgumentError(f"Cannot benchmark object of type {type(model).__name__}")


def benchmark_latency(
    model: Union[torch.nn.Module, Callable[[RadarScan], object]],
    scans: Sequence[RadarScan],
    repetitions: int = 1,
    warmup: int = 1,
) -> LatencyReport:
    """
    Time `repetitions` forward passes of every scan.

    Args:
        model: Frozen wrapper, torch module or any callable taking a scan
        scans: At least one scan
        repetitions: Timed passes per scan (>= 1)
        warmup: Untimed passes on the first scan

    Returns:
        LatencyReport with len(scans) * repetitions samples
    """
    if not scans:
        raise ArgumentError("benchmark_latency needs at least one scan")
    if repetitions < 1 or warmup < 0:
        raise ArgumentError(f"repetitions must be >= 1 and warmup >= 0, got {repetitions}, {warmup}")
    run = _runner(model)

    for _ in range(warmup):
        run(scans[0])

    report = LatencyReport()
    for scan in scans:
        for _ in range(repetitions):
            start = time.perf_counter()
            run(scan)
            report.samples.append(time.perf_counter() - start)
            report.num_points.append(scan.num_points)
    logger.info(f"Benchmarked {len(report.samples)} passes, mean {report.mean * 1e3:.2f} ms")
    return report
