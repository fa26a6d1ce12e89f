"""Configuration management module."""

from conformal_rigidity.config.settings import (
    CacheConfig,
    ChainConfig,
    ObservabilityConfig,
    OutputConfig,
    QuadratureConfig,
    RunConfig,
    SolverConfig,
    SweepConfig,
    get_run_config,
    reset_run_config,
)

__all__ = [
    "CacheConfig",
    "ChainConfig",
    "ObservabilityConfig",
    "OutputConfig",
    "QuadratureConfig",
    "RunConfig",
    "SolverConfig",
    "SweepConfig",
    "get_run_config",
    "reset_run_config",
]
