"""Experiment configuration, sweeps, shaper comparison and the CLI."""
from .config import ConfigError, ExperimentConfig, config_from_dict, load_config, read_config
from .files import DeshapeError, DeshapeReport, deshape_file, shape_file
from .sweep import (
    SWEEP_COLUMNS,
    DeskScaleWarning,
    RateMismatchError,
    check_desk_scale,
    compare_shapers,
    grid_points,
    point_seed,
    run_sweep,
)

__all__ = [
    "ConfigError",
    "DeshapeError",
    "DeshapeReport",
    "DeskScaleWarning",
    "ExperimentConfig",
    "RateMismatchError",
    "SWEEP_COLUMNS",
    "check_desk_scale",
    "compare_shapers",
    "config_from_dict",
    "deshape_file",
    "grid_points",
    "load_config",
    "point_seed",
    "read_config",
    "run_sweep",
    "shape_file",
]
