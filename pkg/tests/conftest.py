"""Pytest configuration and shared fixtures.

This module provides shared fixtures and configuration for all tests.
"""

import json
import os
from collections.abc import Iterator
from pathlib import Path
from typing import Any

import pytest

from conformal_rigidity.cache import reset_model_cache
from conformal_rigidity.config.settings import RunConfig, reset_run_config
from conformal_rigidity.models.domain import Annulus, Disk, MultiplyConnected, Polygon, SmoothJordan
from conformal_rigidity.observability.metrics import metrics

ENV_PREFIXES = (
    "QUADRATURE_",
    "SOLVER_",
    "SWEEP_",
    "CHAIN_",
    "OUTPUT_",
    "CACHE_",
    "OBSERVABILITY_",
)


@pytest.fixture(autouse=True)
def reset_state(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Reset global configuration, the model cache and metrics around each test."""
    for key in [k for k in os.environ if k.startswith(ENV_PREFIXES)]:
        monkeypatch.delenv(key)
    reset_run_config()
    reset_model_cache()
    metrics.reset_all_metrics()
    yield
    reset_run_config()
    reset_model_cache()


@pytest.fixture
def config() -> RunConfig:
    """Default run configuration."""
    return RunConfig()


@pytest.fixture
def fast_config() -> RunConfig:
    """Coarser configuration for tests that only need a few digits."""
    return RunConfig().with_overrides(
        quadrature={"nodes_per_component": 256},
        sweep={"points": 6, "base_cells": 32, "max_depth": 6, "contour_grid": 129},
        output={"workers": 2},
    )


@pytest.fixture
def unit_disk() -> Disk:
    """The unit disk."""
    return Disk(radius=1.0)


@pytest.fixture
def annulus() -> Annulus:
    """Annulus 0.25 < |z| < 1."""
    return Annulus(r_inner=0.25, r_outer=1.0)


@pytest.fixture
def square() -> Polygon:
    """Square with vertices (+-1, +-1)."""
    return Polygon(vertices=(-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j))


@pytest.fixture
def ellipse() -> SmoothJordan:
    """Ellipse with semi-axes 1.3 and 0.7."""
    return SmoothJordan(coefficients=((1, 1.0), (-1, 0.3)))


@pytest.fixture
def triangle() -> Polygon:
    """Triangle with vertices 0, 2 and 1 + 1.5i."""
    return Polygon(vertices=(0j, 2 + 0j, 1 + 1.5j))


@pytest.fixture
def holed_disk() -> MultiplyConnected:
    """Unit disk with a circular hole of radius 0.2 at 0.3."""
    return MultiplyConnected(outer=Disk(radius=1.0), holes=(Disk(center=0.3, radius=0.2),))


def write_domain(directory: Path, name: str, data: dict[str, Any]) -> Path:
    """Write a domain file and return its path."""
    path = directory / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path
