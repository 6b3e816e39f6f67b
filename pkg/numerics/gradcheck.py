"""
Finite-difference gradient oracle.

Compares autograd gradients of a model fragment against central
differences (step h on double-precision parameters). Non-scalar fragment
outputs are reduced through a fixed random projection so that no output
direction is silently ignored (a plain sum would hide, e.g., everything
orthogonal to a softmax's constant row sum).
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np
import torch

from common.errors import ArgumentError

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-5
RELATIVE_FLOOR = 1e-3


@dataclass
class GradCheckReport:
    """Outcome of one gradient check."""

    tolerance: float
    max_rel_error: float = 0.0
    per_parameter: Dict[str, float] = field(default_factory=dict)
    failing: List[str] = field(default_factory=list)
    entries_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failing


def _relative_error(analytic: float, numeric: float, floor: float) -> float:
    scale = max(abs(analytic), abs(numeric), floor)
    return abs(analytic - numeric) / scale


def grad_check(
    fragment: Callable[[], torch.Tensor],
    params: Mapping[str, torch.Tensor],
    tolerance: float = 1e-6,
    h: float = DEFAULT_STEP,
    max_entries_per_param: Optional[int] = None,
    seed: int = 0,
    floor: float = RELATIVE_FLOOR,
) -> GradCheckReport:
    """
    Check analytic against central-difference gradients.

    Args:
        fragment: Zero-argument callable evaluating the fragment with the
                  current parameter values
        params: Named leaf tensors (float64, requires_grad) the fragment reads
        tolerance: Largest accepted relative error per entry
        h: Central-difference step
        max_entries_per_param: Check at most this many randomly chosen
                               entries per parameter (None = all)
        seed: Seed for the output projection and entry sampling
        floor: Lower bound of the relative-error denominator

    Returns:
        GradCheckReport; failures are report entries, never exceptions

    Raises:
        ArgumentError: If a parameter is not double precision
    """
    for name, param in params.items():
        if param.dtype != torch.float64:
            raise ArgumentError(f"grad_check needs float64 parameters; '{name}' is {param.dtype}")

    rng = np.random.default_rng(seed)
    names = list(params)
    tensors = [params[name] for name in names]

    with torch.no_grad():
        probe = fragment()
    projection = torch.as_tensor(rng.standard_normal(tuple(probe.shape)), dtype=torch.float64)

    def objective() -> torch.Tensor:
        return (fragment() * projection).sum()

    for tensor in tensors:
        tensor.requires_grad_(True)
    value = objective()
    if value.requires_grad:
        analytic = torch.autograd.grad(value, tensors, allow_unused=True)
    else:
        analytic = [None] * len(tensors)
    analytic = [
        torch.zeros_like(t) if g is None else g.detach()
        for t, g in zip(tensors, analytic)
    ]

    report = GradCheckReport(tolerance=tolerance)
    with torch.no_grad():
        for name, tensor, grad in zip(names, tensors, analytic):
            flat = tensor.view(-1)
            grad_flat = grad.reshape(-1)
            entries = np.arange(flat.numel())
            if max_entries_per_param is not None and entries.size > max_entries_per_param:
                entries = np.sort(rng.choice(entries, size=max_entries_per_param, replace=False))

            worst = 0.0
            for index in entries:
                original = flat[index].item()
                flat[index] = original + h
                plus = objective().item()
                flat[index] = original - h
                minus = objective().item()
                flat[index] = original
                numeric = (plus - minus) / (2.0 * h)
                worst = max(worst, _relative_error(grad_flat[index].item(), numeric, floor))
                report.entries_checked += 1

            report.per_parameter[name] = worst
            report.max_rel_error = max(report.max_rel_error, worst)
            if worst > tolerance:
                report.failing.append(name)

    logger.debug(
        f"grad_check: {report.entries_checked} entries, "
        f"max rel. error {report.max_rel_error:.3e}, failing {report.failing}"
    )
    return report
