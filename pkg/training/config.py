"""Training hyperparameters."""

from dataclasses import asdict, dataclass, field
from typing import Dict, Tuple

from common.errors import ConfigError
from simulation.augmentation import AugConfig


@dataclass
class TrainConfig:
    """
    Training recipe.

    batch_size is a gradient-accumulation count: scans have different point
    counts, so each scan runs its own forward/backward and gradients are
    summed (scaled by 1/batch) before one optimizer step.
    """

    epochs: int = 50
    batch_size: int = 16
    lr0: float = 5e-4
    weight_decay: float = 0.01
    class_weights: Tuple[float, float] = (0.5, 8.0)
    lambda_ce: float = 1.0
    lambda_lov: float = 1.0
    aug: AugConfig = field(default_factory=AugConfig)
    rng_seed: int = 0

    def __post_init__(self):
        if isinstance(self.aug, dict):
            self.aug = AugConfig.from_dict(self.aug)
        self.class_weights = tuple(float(w) for w in self.class_weights)
        self.validate()

    def validate(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.lr0 < 0 or self.weight_decay < 0:
            raise ConfigError("lr0 and weight_decay must be >= 0")
        if len(self.class_weights) != 2 or min(self.class_weights) <= 0:
            raise ConfigError(f"class_weights must be two positive values, got {self.class_weights}")
        if self.lambda_ce < 0 or self.lambda_lov < 0:
            raise ConfigError("loss weights must be >= 0")

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "TrainConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown train config keys: {sorted(unknown)}")
        return cls(**data)
