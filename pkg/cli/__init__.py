"""Command-line surface: run configuration and subcommands."""

from cli.config import PRESETS, RunConfig, echo_config, resolve_run_config

__all__ = ["PRESETS", "RunConfig", "echo_config", "resolve_run_config"]
