"""
Global precision mode.

Double precision is used for every verification path (gradient checks,
formula oracles, permutation tests); single precision for training and
inference speed. The mode is a process-wide setting applied through
torch's default dtype.
"""

import os
from contextlib import contextmanager
from typing import Iterator

import numpy as np
import torch

from common.errors import ConfigError

PRECISION_ENV_VAR = "VELO_ATTN_PRECISION"

_DTYPES = {
    "single": torch.float32,
    "double": torch.float64,
}


def torch_dtype(mode: str) -> torch.dtype:
    """Torch dtype for a precision mode name."""
    if mode not in _DTYPES:
        raise ConfigError(f"Unknown precision mode '{mode}' (expected one of {sorted(_DTYPES)})")
    return _DTYPES[mode]


def numpy_dtype(mode: str) -> np.dtype:
    """Little-endian numpy dtype matching a precision mode."""
    return np.dtype("<f8") if torch_dtype(mode) == torch.float64 else np.dtype("<f4")


def get_precision() -> str:
    """Currently active precision mode."""
    return "double" if torch.get_default_dtype() == torch.float64 else "single"


def set_precision(mode: str) -> None:
    """Make `mode` the process-wide precision."""
    torch.set_default_dtype(torch_dtype(mode))


def precision_from_env(default: str = "single") -> str:
    """Read the precision mode from VELO_ATTN_PRECISION."""
    mode = os.environ.get(PRECISION_ENV_VAR, default).strip().lower()
    torch_dtype(mode)
    return mode


@contextmanager
def precision(mode: str) -> Iterator[str]:
    """Scope a precision mode, restoring the previous one on exit."""
    previous = get_precision()
    set_precision(mode)
    try:
        yield mode
    finally:
        set_precision(previous)
