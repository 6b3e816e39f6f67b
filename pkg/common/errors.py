"""
Error hierarchy for the radar moving-object segmentation pipeline.

Every error carries the process exit code the CLI reports for it:

    0  success
    2  configuration error (bad flags, bad config file, checkpoint/config mismatch)
    3  data error (malformed scan files, bad labels, unreadable paths)
    4  numeric failure (non-finite loss or gradient)
    5  acceptance check failed (run results below the fixed criteria)

InvariantError marks an internal breach (a bug), not a user error.
"""

from typing import Optional


class VeloAttnError(Exception):
    """Base class for all pipeline errors."""

    exit_code: int = 1


class ConfigError(VeloAttnError):
    """Invalid configuration value or combination."""

    exit_code = 2


class VersionError(ConfigError):
    """Checkpoint format or architecture does not match what was requested."""


class ArgumentError(ConfigError, ValueError):
    """Argument outside the accepted domain of an operation."""


class DimensionError(ArgumentError):
    """Array shapes do not conform."""


class DataError(VeloAttnError):
    """Scan data violates the data model."""

    exit_code = 3


class ParseError(DataError):
    """Malformed row in a scan file."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        location = ""
        if path is not None:
            location += f"{path}"
        if line is not None:
            location += f":{line}" if location else f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)


class MappingError(DataError):
    """Semantic label id not covered by the label mapping."""


class NumericError(VeloAttnError):
    """Non-finite value produced during training or optimization."""

    exit_code = 4


class InvariantError(VeloAttnError):
    """Internal invariant breached."""

    exit_code = 1


class AcceptanceError(VeloAttnError):
    """A trained run misses a result criterion (e.g. does not beat the baseline)."""

    exit_code = 5
