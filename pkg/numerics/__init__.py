"""
Differentiable numeric kernels, optimizer, schedule, gradient oracle and
checkpoint archive.
"""

from numerics.kernels import linear, gelu, layer_norm, softmax, Linear, LayerNorm, GELU, FCNormAct
from numerics.optim import ParamStore, OptimState, LrSchedule, init_optim_state, adamw_step, cosine_lr
from numerics.gradcheck import GradCheckReport, grad_check
from numerics.checkpoint import save_checkpoint, load_checkpoint, assign_parameters
from numerics.precision import get_precision, set_precision, precision, precision_from_env

__all__ = [
    "linear",
    "gelu",
    "layer_norm",
    "softmax",
    "Linear",
    "LayerNorm",
    "GELU",
    "FCNormAct",
    "ParamStore",
    "OptimState",
    "LrSchedule",
    "init_optim_state",
    "adamw_step",
    "cosine_lr",
    "GradCheckReport",
    "grad_check",
    "save_checkpoint",
    "load_checkpoint",
    "assign_parameters",
    "get_precision",
    "set_precision",
    "precision",
    "precision_from_env",
]
