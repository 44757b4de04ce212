"""Experiment orchestration: configs, manifests, command implementations."""
from .config import (
    ConfigError,
    ExperimentConfig,
    RunManifest,
    config_from_pairs,
    load_config,
    load_manifest,
    read_pairs,
    write_pairs,
)
from .runner import cmd_batch, cmd_evaluate, cmd_generate, cmd_plot, cmd_train

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "RunManifest",
    "config_from_pairs",
    "load_config",
    "load_manifest",
    "read_pairs",
    "write_pairs",
    "cmd_train",
    "cmd_generate",
    "cmd_evaluate",
    "cmd_plot",
    "cmd_batch",
]
