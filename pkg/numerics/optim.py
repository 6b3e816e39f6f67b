"""
Parameter store, AdamW optimizer step and cosine learning-rate schedule.

AdamW defaults (β1=0.9, β2=0.999, ε=1e-8, weight_decay=0.01) are the
optimizer's standard values; the schedule anneals to eta_min=0 and is
stepped once per epoch.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import torch
import torch.nn as nn

from common.errors import ArgumentError, DimensionError, NumericError

logger = logging.getLogger(__name__)


class ParamStore:
    """
    Named parameter arrays with paired gradient buffers.

    A view over torch parameters: values live in `param.data`, gradients in
    `param.grad`. Names are unique and fixed at construction.
    """

    def __init__(self, params: Mapping[str, torch.Tensor]):
        self._params: Dict[str, torch.Tensor] = {}
        for name, param in params.items():
            if name in self._params:
                raise ArgumentError(f"Duplicate parameter name: {name}")
            self._params[name] = param

    @classmethod
    def from_module(cls, module: nn.Module) -> "ParamStore":
        return cls(dict(module.named_parameters()))

    def __getitem__(self, name: str) -> torch.Tensor:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __len__(self) -> int:
        return len(self._params)

    def __iter__(self) -> Iterator[str]:
        return iter(self._params)

    def names(self) -> List[str]:
        return list(self._params)

    def items(self) -> List[Tuple[str, torch.Tensor]]:
        return list(self._params.items())

    def shapes(self) -> Dict[str, Tuple[int, ...]]:
        return {name: tuple(p.shape) for name, p in self._params.items()}

    def num_values(self) -> int:
        """Total number of scalar parameters."""
        return sum(p.numel() for p in self._params.values())

    def grad(self, name: str) -> torch.Tensor:
        """Gradient buffer of `name` (zeros if nothing accumulated yet)."""
        param = self._params[name]
        if param.grad is None:
            return torch.zeros_like(param)
        if param.grad.shape != param.shape:
            raise DimensionError(
                f"Gradient shape {tuple(param.grad.shape)} != value shape {tuple(param.shape)} for '{name}'"
            )
        return param.grad

    def zero_grad(self) -> None:
        """Reset every gradient buffer to zeros (allocating missing ones)."""
        for param in self._params.values():
            if param.grad is None:
                param.grad = torch.zeros_like(param)
            else:
                param.grad.detach_()
                param.grad.zero_()

    def first_non_finite(self, grads: bool = False) -> Optional[str]:
        """Name of the first parameter with a non-finite value (or gradient)."""
        for name, param in self._params.items():
            tensor = param.grad if grads else param
            if tensor is not None and not bool(torch.isfinite(tensor).all()):
                return name
        return None


@dataclass
class OptimState:
    """
    AdamW moments and step counter.

    The moments m, v live inside the wrapped torch optimizer's per-parameter
    state; `t` counts completed steps.
    """

    optimizer: torch.optim.AdamW
    lr: float
    betas: Tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    weight_decay: float = 0.01
    t: int = 0

    def moments(self, param: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        state = self.optimizer.state.get(param, {})
        if not state:
            return torch.zeros_like(param), torch.zeros_like(param)
        return state["exp_avg"], state["exp_avg_sq"]


def init_optim_state(
    params: ParamStore,
    lr: float,
    betas: Tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
    weight_decay: float = 0.01,
) -> OptimState:
    """Create an AdamW optimizer over every parameter of the store."""
    if lr < 0:
        raise ArgumentError(f"Learning rate must be >= 0, got {lr}")
    optimizer = torch.optim.AdamW(
        [p for _, p in params.items()],
        lr=lr,
        betas=betas,
        eps=eps,
        weight_decay=weight_decay,
        foreach=False,
    )
    return OptimState(optimizer=optimizer, lr=lr, betas=betas, eps=eps, weight_decay=weight_decay)


def adamw_step(params: ParamStore, state: OptimState, lr: float) -> None:
    """
    One decoupled-weight-decay AdamW update with bias correction.

    Gradients are zeroed afterwards. A non-finite gradient aborts the step
    before any parameter changes.

    Raises:
        NumericError: If any gradient holds NaN or Inf
    """
    bad = params.first_non_finite(grads=True)
    if bad is not None:
        raise NumericError(f"Non-finite gradient in parameter '{bad}' at optimizer step {state.t + 1}")

    # Parameters that received no gradient still get decayed.
    for _, param in params.items():
        if param.grad is None:
            param.grad = torch.zeros_like(param)

    for group in state.optimizer.param_groups:
        group["lr"] = lr
    state.lr = lr

    state.optimizer.step()
    state.t += 1
    params.zero_grad()

    bad = params.first_non_finite(grads=False)
    if bad is not None:
        raise NumericError(f"Parameter '{bad}' became non-finite at optimizer step {state.t}")


@dataclass(frozen=True)
class LrSchedule:
    """Cosine annealing from lr0 to eta_min over total_steps."""

    lr0: float
    total_steps: int
    eta_min: float = 0.0

    def __post_init__(self):
        if self.total_steps < 1:
            raise ArgumentError(f"total_steps must be >= 1, got {self.total_steps}")
        if self.eta_min > self.lr0:
            raise ArgumentError(f"eta_min {self.eta_min} exceeds lr0 {self.lr0}")


def cosine_lr(schedule: LrSchedule, step: int) -> float:
    """
    η(step) = eta_min + ½(lr0 − eta_min)(1 + cos(π·step/total_steps)).

    Raises:
        ArgumentError: If step lies outside [0, total_steps]
    """
    if not 0 <= step <= schedule.total_steps:
        raise ArgumentError(f"step {step} outside [0, {schedule.total_steps}]")
    cosine = math.cos(math.pi * step / schedule.total_steps)
    return schedule.eta_min + 0.5 * (schedule.lr0 - schedule.eta_min) * (1.0 + cosine)
