"""Green's function solver and logarithmic capacity.

G(z, z0) = log|z - z0| + rho(z), where rho is the harmonic function with
boundary values -log|z - z0|. rho is expanded in the harmonic basis of
``services.basis`` and fitted by truncated least squares on the boundary
quadrature nodes.
"""

import logging
import math
import time

import numpy as np

from conformal_rigidity.cache import get_model_cache, green_key
from conformal_rigidity.config.settings import RunConfig, SolverConfig, get_run_config
from conformal_rigidity.geometry.measures import planar_domain
from conformal_rigidity.geometry.planar import PlanarDomain
from conformal_rigidity.geometry.quadrature import ComplexArray, FloatArray
from conformal_rigidity.models.domain import DomainSpec, punctures_of
from conformal_rigidity.models.errors import ConfigurationError, ConvergenceError
from conformal_rigidity.models.results import DeltaCapacityCheck, GreenModel
from conformal_rigidity.observability.metrics import metrics
from conformal_rigidity.observability.tracing import trace_sync
from conformal_rigidity.services.basis import (
    harmonic_basis,
    harmonic_columns,
    harmonic_derivative,
    harmonic_value,
)
from conformal_rigidity.services.linalg import truncated_lstsq

logger = logging.getLogger(__name__)

PUNCTURE_NOTE = "punctures are polar and ignored by the Green solver"


def _solve(domain: PlanarDomain, z0: complex, solver: SolverConfig) -> GreenModel:
    start = time.perf_counter()
    basis = harmonic_basis(domain, solver.basis_size, solver)
    rule = domain.quadrature()
    matrix = harmonic_columns(basis, rule.nodes)
    rhs = -np.log(np.abs(rule.nodes - z0))
    coefficients, rank = truncated_lstsq(matrix, rhs, solver.singular_value_cutoff)

    # residual also on an offset rule, so the fit is checked between nodes
    check = domain.quadrature(domain.config.nodes_per_component + 17).nodes
    check_values = harmonic_value(basis, coefficients, check) + np.log(np.abs(check - z0))
    residual = max(
        float(np.max(np.abs(matrix @ coefficients - rhs))),
        float(np.max(np.abs(check_values))),
    )
    elapsed = time.perf_counter() - start
    metrics.observe_solve_duration(kind="green", duration=elapsed)
    metrics.observe_green_residual(residual)

    context = {
        "kind": domain.spec.kind,
        "pole": [z0.real, z0.imag],
        "basis_size": basis.size,
        "rank": rank,
        "residual": residual,
        "duration": round(elapsed, 4),
    }
    if residual > solver.residual_tol:
        metrics.increment_solve(kind="green", status="error")
        logger.warning("Green solve did not converge", extra=context)
        raise ConvergenceError(
            "Green boundary residual above tolerance",
            residual=residual,
            tolerance=solver.residual_tol,
            details={"basis_size": solver.basis_size},
        )
    metrics.increment_solve(kind="green", status="success")
    logger.info("Solved Green's function", extra=context)
    notes = (PUNCTURE_NOTE,) if punctures_of(domain.spec) else ()
    return GreenModel(
        domain=domain.spec,
        pole=z0,
        basis=basis,
        coefficients=tuple(float(c) for c in coefficients),
        residual=residual,
        node_count=rule.size,
        notes=notes,
    )


@trace_sync(operation="solve_green")
def solve_green(
    spec: DomainSpec,
    z0: complex,
    basis_size: int | None = None,
    config: RunConfig | None = None,
) -> GreenModel:
    """Solve for the Green's function of ``spec`` with pole ``z0``.

    Solved models are shared through the model cache.

    Args:
        spec: Domain specification.
        z0: Pole, strictly inside the domain and away from punctures.
        basis_size: Degree of the interior expansion (configured default when None).
        config: Run configuration (global configuration when None).

    Returns:
        GreenModel: Coefficients and achieved boundary residual.

    Raises:
        ConfigurationError: If ``basis_size`` < 8.
        DomainMembershipError: If z0 is outside the domain or on a puncture.
        ConvergenceError: If the boundary residual exceeds the solver tolerance.
    """
    cfg = config or get_run_config()
    size = cfg.solver.basis_size if basis_size is None else basis_size
    if size < 8:
        raise ConfigurationError("basis_size must be at least 8", {"basis_size": size})
    solver = cfg.solver.model_copy(update={"basis_size": size})
    z0 = complex(z0)
    domain = planar_domain(spec, cfg.quadrature)
    domain.require_interior(z0, "pole")
    domain.require_away_from_punctures(z0)
    if not cfg.cache.enabled:
        return _solve(domain, z0, solver)
    key = green_key(spec, z0, solver, cfg.quadrature)
    return get_model_cache(cfg.cache).get_or_solve(key, lambda: _solve(domain, z0, solver))


def _coefficients(model: GreenModel) -> FloatArray:
    return np.asarray(model.coefficients, dtype=float)


def regular_part(model: GreenModel, z: ComplexArray | complex) -> FloatArray:
    """rho(z) = G(z, z0) - log|z - z0|."""
    return harmonic_value(model.basis, _coefficients(model), np.atleast_1d(z))


def green_value(model: GreenModel, z: ComplexArray | complex) -> FloatArray:
    """G(z, z0) at interior points."""
    points = np.atleast_1d(np.asarray(z, dtype=complex))
    with np.errstate(divide="ignore"):
        singular = np.log(np.abs(points - model.pole))
    return singular + regular_part(model, points)


def green_gradient(model: GreenModel, z: ComplexArray | complex) -> ComplexArray:
    """Gradient of G written as the complex number G_x + i G_y."""
    points = np.atleast_1d(np.asarray(z, dtype=complex))
    derivative = 1.0 / (points - model.pole) + harmonic_derivative(
        model.basis, _coefficients(model), points
    )
    return np.conj(derivative)


def log_capacity(model: GreenModel) -> float:
    """Logarithmic capacity c_beta(z0) = exp(rho(z0))."""
    return math.exp(float(regular_part(model, model.pole)[0]))


def circle_mean(model: GreenModel, radius: float, samples: int = 256) -> float:
    """Mean of G over the circle |z - z0| = radius (trapezoid rule).

    For radius below the boundary distance this equals log(radius * c_beta).
    """
    theta = 2.0 * math.pi * np.arange(samples) / samples
    return float(np.mean(green_value(model, model.pole + radius * np.exp(1j * theta))))


def delta_capacity_check(
    spec: DomainSpec, model: GreenModel, config: RunConfig | None = None
) -> DeltaCapacityCheck:
    """Compare 1/delta(z0) with c_beta(z0); the gap is nonnegative."""
    cfg = config or get_run_config()
    delta = planar_domain(spec, cfg.quadrature).dist_boundary(model.pole)
    c_beta = log_capacity(model)
    return DeltaCapacityCheck(delta_inv=1.0 / delta, c_beta=c_beta, gap=1.0 / delta - c_beta)
