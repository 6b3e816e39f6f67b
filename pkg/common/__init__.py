"""
Shared infrastructure: error hierarchy and logging setup.
"""

from common.errors import (
    VeloAttnError,
    ConfigError,
    VersionError,
    ArgumentError,
    DimensionError,
    DataError,
    ParseError,
    MappingError,
    NumericError,
    InvariantError,
)
from common.logging_setup import configure_logging

__all__ = [
    "VeloAttnError",
    "ConfigError",
    "VersionError",
    "ArgumentError",
    "DimensionError",
    "DataError",
    "ParseError",
    "MappingError",
    "NumericError",
    "InvariantError",
    "configure_logging",
]
