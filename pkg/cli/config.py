"""
Run configuration: one JSON-serializable view of every knob of a run.

Resolution order (later wins):
    defaults -> preset (--preset) -> JSON file (--config) -> command-line flags

The effective configuration is echoed as config.json into the output
directory; that file alone reproduces the run.
"""

import copy
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

from common.errors import ConfigError
from models.backbone.radar_velocity_transformer import ModelConfig
from numerics.precision import precision_from_env, torch_dtype
from simulation.synth_scene import SynthConfig
from training.config import TrainConfig

logger = logging.getLogger(__name__)

CONFIG_ECHO_NAME = "config.json"

PRESETS: Dict[str, Dict[str, Any]] = {
    "tiny": {
        "model": {"stage_channels": [8, 16, 32], "n_vtl": 8, "n_tus": 6, "k_ds": 8},
        "train": {"epochs": 20, "batch_size": 8},
    },
    "paper": {
        "model": {"stage_channels": [32, 64, 128, 256, 512], "n_vtl": 16, "n_tus": 12, "k_ds": 16},
        "train": {"epochs": 50, "batch_size": 128, "lr0": 5e-4},
    },
}
PRESETS["full"] = PRESETS["paper"]


@dataclass
class DataConfig:
    """Dataset location and synthetic split sizes."""
    data_dir: str = "data/synth"
    n_train: int = 64
    n_val: int = 16
    n_test: int = 16

    def __post_init__(self):
        if min(self.n_train, self.n_val, self.n_test) < 0:
            raise ConfigError("split sizes must be >= 0")


@dataclass
class PathsConfig:
    out_dir: str = "runs/latest"
    checkpoint: Optional[str] = None


@dataclass
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    data: DataConfig = field(default_factory=DataConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)
    precision: str = "single"
    workers: int = 1

    def __post_init__(self):
        try:
            torch_dtype(self.precision)
        except Exception as e:
            raise ConfigError(str(e)) from e
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown config sections: {sorted(unknown)}")
        try:
            return cls(
                model=ModelConfig.from_dict(data.get("model", {})),
                train=TrainConfig.from_dict(data.get("train", {})),
                synth=SynthConfig.from_dict(data.get("synth", {})),
                data=DataConfig(**data.get("data", {})),
                paths=PathsConfig(**data.get("paths", {})),
                precision=data.get("precision", "single"),
                workers=data.get("workers", 1),
            )
        except TypeError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e


def deep_update(base: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge `updates` into a copy of `base`."""
    merged = copy.deepcopy(base)
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_update(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def dotted_to_nested(overrides: Dict[str, Any]) -> Dict[str, Any]:
    """{"train.epochs": 3} -> {"train": {"epochs": 3}}; None values are dropped."""
    nested: Dict[str, Any] = {}
    for dotted, value in overrides.items():
        if value is None:
            continue
        node = nested
        *parents, leaf = dotted.split(".")
        for part in parents:
            node = node.setdefault(part, {})
        node[leaf] = value
    return nested


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    return data


def resolve_run_config(
    config_path: Optional[Union[str, Path]] = None,
    preset: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """
    Build the effective RunConfig.

    Args:
        config_path: Optional JSON config file
        preset: Optional preset name ("tiny", "paper" or its alias "full")
        overrides: Dotted-key overrides, e.g. {"train.epochs": 3}

    Raises:
        ConfigError: Unknown preset, bad file, or invalid values
    """
    merged = RunConfig(precision=precision_from_env()).to_dict()
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"Unknown preset '{preset}', choose from {sorted(PRESETS)}")
        merged = deep_update(merged, PRESETS[preset])
    if config_path is not None:
        merged = deep_update(merged, read_config_file(config_path))
    merged = deep_update(merged, dotted_to_nested(overrides or {}))
    return RunConfig.from_dict(merged)


def echo_config(config: RunConfig, directory: Union[str, Path]) -> Path:
    """Write the effective configuration as config.json into `directory`."""
    path = Path(directory) / CONFIG_ECHO_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(config.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug(f"Configuration echoed to {path}")
    return path
