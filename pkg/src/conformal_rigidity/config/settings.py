"""Configuration management for the conformal rigidity toolkit.

This module defines all run settings using Pydantic for validation and type
safety. Values are loaded from environment variables with defaults tuned for
desk-scale domains (unit-size disks, annuli, polygons and smooth curves).
"""

from pathlib import Path
from typing import Literal, Self

import numpy as np
from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class QuadratureConfig(BaseSettings):
    """Boundary discretization configuration."""

    model_config = SettingsConfigDict(env_prefix="QUADRATURE_")

    nodes_per_component: int = Field(
        default=512, ge=8, le=65536, description="Base quadrature nodes per boundary component"
    )
    gauss_order: int = Field(default=16, ge=2, le=64, description="Gauss nodes per polygon panel")
    corner_grading_ratio: float = Field(
        default=0.15, gt=0.0, lt=1.0, description="Geometric ratio of graded corner panels"
    )
    corner_grading_levels: int = Field(
        default=8, ge=0, le=24, description="Number of graded panels toward each corner"
    )
    simplicity_samples: int = Field(
        default=512, ge=16, le=8192, description="Samples per curve for the self-intersection test"
    )
    polyline_resolution: int = Field(
        default=4096,
        ge=64,
        le=262144,
        description="Polyline samples of curved components for membership and ray tests",
    )


class SolverConfig(BaseSettings):
    """Basis sizes and linear-algebra tolerances for Green and kernel solves."""

    model_config = SettingsConfigDict(env_prefix="SOLVER_")

    basis_size: int = Field(default=48, ge=8, le=512, description="Interior expansion basis size")
    hole_basis_size: int = Field(default=32, ge=1, le=256, description="Basis size per hole")
    corner_poles: int = Field(
        default=12, ge=0, le=64, description="Rational poles clustered outside each polygon corner"
    )
    corner_pole_sigma: float = Field(
        default=4.0, gt=0.0, le=10.0, description="Clustering exponent of corner poles"
    )
    singular_value_cutoff: float = Field(
        default=1e-12, gt=0.0, lt=1e-3, description="Relative cutoff of rank-revealing solves"
    )
    residual_tol: float = Field(
        default=1e-6, gt=0.0, lt=1.0, description="Maximum Green boundary residual"
    )


class SweepConfig(BaseSettings):
    """Sublevel-set sweep and co-area flux configuration."""

    model_config = SettingsConfigDict(env_prefix="SWEEP_")

    t_min: float = Field(default=-6.0, lt=0.0, description="Most negative level of the t-grid")
    t_max: float = Field(default=-0.05, lt=0.0, description="Level of the t-grid closest to 0")
    points: int = Field(default=40, ge=2, le=1000, description="Number of log-spaced levels")
    monotone_rel_tol: float = Field(
        default=1e-6, gt=0.0, lt=1.0, description="Allowed relative increase of f per step"
    )
    volume_rel_tol: float = Field(
        default=1e-6, gt=0.0, lt=1.0, description="Target relative error of sublevel volumes"
    )
    base_cells: int = Field(
        default=64, ge=8, le=1024, description="Initial quadtree cells per side"
    )
    max_depth: int = Field(default=8, ge=1, le=16, description="Maximum quadtree refinement depth")
    contour_grid: int = Field(
        default=257, ge=33, le=4097, description="Grid points per side for level-curve extraction"
    )
    contour_samples: int = Field(
        default=1024, ge=64, le=65536, description="Resampled points per extracted level curve"
    )
    flux_tol: float = Field(default=1e-4, gt=0.0, lt=1.0, description="Co-area flux tolerance")
    limit_zero_rel_tol: float = Field(
        default=0.05, gt=0.0, lt=1.0, description="Relative tolerance of the t -> 0 limit"
    )
    limit_inf_rel_tol: float = Field(
        default=0.02, gt=0.0, lt=1.0, description="Relative tolerance of the t -> -inf limit"
    )

    @model_validator(mode="after")
    def validate_range(self) -> Self:
        """Validate that the t-grid range is ordered."""
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be smaller than t_max")
        return self

    def t_grid(self) -> list[float]:
        """Build the default log-spaced grid, ordered from t_max down to t_min.

        Returns:
            list[float]: Strictly decreasing negative levels.
        """
        magnitudes = np.geomspace(-self.t_max, -self.t_min, self.points)
        return [float(-m) for m in magnitudes]


class ChainConfig(BaseSettings):
    """Inequality-chain tolerances."""

    model_config = SettingsConfigDict(env_prefix="CHAIN_")

    chain_rel_tol: float = Field(
        default=1e-6, gt=0.0, lt=1.0, description="Relative slack allowed in chain ordering"
    )
    equality_rel_tol: float = Field(
        default=1e-5, gt=0.0, lt=1.0, description="Relative gap below which entries are equal"
    )
    suita_rel_tol: float = Field(
        default=3e-6,
        gt=0.0,
        lt=1.0,
        description="Tighter equality tolerance for the (piK, cbeta_sq) pair",
    )
    include_sweep: bool = Field(default=False, description="Attach a sublevel sweep to reports")
    probe_count: int = Field(
        default=64, ge=8, le=100000, description="Interior probe points for defect checks"
    )


class OutputConfig(BaseSettings):
    """Output and reproducibility configuration."""

    model_config = SettingsConfigDict(env_prefix="OUTPUT_")

    seed: int = Field(default=20240517, ge=0, description="Random seed for probe points")
    workers: int = Field(default=4, ge=1, le=64, description="Thread pool size")
    corpus_dir: Path | None = Field(
        default=None, description="Corpus directory (defaults to the bundled corpus)"
    )
    svg_width: float = Field(default=7.0, gt=1.0, le=40.0, description="SVG width in inches")


class CacheConfig(BaseSettings):
    """Solved-model cache configuration."""

    model_config = SettingsConfigDict(env_prefix="CACHE_")

    max_size: int = Field(default=64, ge=1, le=10000, description="Maximum cached Green models")
    enabled: bool = Field(default=True, description="Enable Green model caching")


class ObservabilityConfig(BaseSettings):
    """Logging and metrics configuration."""

    model_config = SettingsConfigDict(env_prefix="OBSERVABILITY_")

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING", description="Logging level"
    )
    log_format: Literal["json", "text"] = Field(default="text", description="Log format")
    metrics_textfile: Path | None = Field(
        default=None, description="Write Prometheus metrics to this file at exit"
    )

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        """Accept lower-case level names."""
        return v.upper() if isinstance(v, str) else v


class RunConfig(BaseSettings):
    """Main run configuration aggregating all sections."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    chain: ChainConfig = Field(default_factory=ChainConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    cache: CacheConfig = Field(default_factory=CacheConfig)
    observability: ObservabilityConfig = Field(default_factory=ObservabilityConfig)

    @model_validator(mode="after")
    def validate_tolerances(self) -> Self:
        """Equality detection must sit above the solver and chain noise floors."""
        if self.chain.equality_rel_tol <= self.solver.residual_tol:
            raise ValueError("equality_rel_tol must exceed the solver residual tolerance")
        if self.chain.equality_rel_tol <= self.chain.chain_rel_tol:
            raise ValueError("equality_rel_tol must exceed the chain ordering tolerance")
        if self.chain.suita_rel_tol <= self.chain.chain_rel_tol:
            raise ValueError("suita_rel_tol must exceed the chain ordering tolerance")
        return self

    def with_overrides(self, **sections: dict[str, object]) -> "RunConfig":
        """Return a validated copy with per-section field overrides.

        Args:
            **sections: Mapping of section name to field updates, e.g.
                ``solver={"basis_size": 64}``.

        Returns:
            RunConfig: New configuration; validators run on every touched section.
        """
        data = self.model_dump()
        for name, updates in sections.items():
            data[name].update({k: v for k, v in updates.items() if v is not None})
        return RunConfig.model_validate(data)


# Global configuration instance
_run_config: RunConfig | None = None


def get_run_config() -> RunConfig:
    """Get or create the global run configuration.

    Returns:
        RunConfig: The global configuration instance.
    """
    global _run_config
    if _run_config is None:
        _run_config = RunConfig()
    return _run_config


def reset_run_config() -> None:
    """Reset the global configuration instance. Useful for testing."""
    global _run_config
    _run_config = None
