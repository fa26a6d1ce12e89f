"""Geometric measures of planar domains.

Every function takes a ``DomainSpec`` and builds (or reuses) the numerical
``PlanarDomain``. Punctures never change a measure.
"""

import logging
import math
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy import integrate

from conformal_rigidity.config.settings import QuadratureConfig
from conformal_rigidity.geometry.planar import PlanarDomain
from conformal_rigidity.geometry.quadrature import ComplexArray, FloatArray, QuadratureRule
from conformal_rigidity.models.domain import DomainSpec
from conformal_rigidity.models.errors import ConvergenceError

logger = logging.getLogger(__name__)

ComplementMethod = Literal["boundary", "polar"]


@lru_cache(maxsize=128)
def _cached_domain(spec: DomainSpec, config_json: str) -> PlanarDomain:
    return PlanarDomain(spec, QuadratureConfig.model_validate_json(config_json))


def planar_domain(spec: DomainSpec, config: QuadratureConfig | None = None) -> PlanarDomain:
    """Return the validated numerical domain of a spec (memoized).

    Raises:
        GeometryError: If the spec violates a geometric invariant.
    """
    cfg = config or QuadratureConfig()
    return _cached_domain(spec, cfg.model_dump_json())


def area(spec: DomainSpec, config: QuadratureConfig | None = None) -> float:
    """Area v(Omega)."""
    return planar_domain(spec, config).area


def perimeter(spec: DomainSpec, config: QuadratureConfig | None = None) -> float:
    """Total boundary arclength sigma(dOmega)."""
    return planar_domain(spec, config).perimeter


def boundary_quadrature(
    spec: DomainSpec, n_nodes: int, config: QuadratureConfig | None = None
) -> QuadratureRule:
    """Boundary quadrature with ``n_nodes`` base nodes per component.

    Raises:
        ConfigurationError: If ``n_nodes`` < 8.
    """
    return planar_domain(spec, config).quadrature(n_nodes)


def dist_boundary(spec: DomainSpec, z: complex, config: QuadratureConfig | None = None) -> float:
    """Distance delta(z) from an interior point to the boundary."""
    return planar_domain(spec, config).dist_boundary(z)


def contains(spec: DomainSpec, z: complex, config: QuadratureConfig | None = None) -> bool:
    """Whether z lies in Omega (a puncture hit exactly counts as outside)."""
    return bool(planar_domain(spec, config).contains(z)[0])


def _complement_boundary(domain: PlanarDomain, z0: complex) -> float:
    # |w - z0|^-4 is the d/d(conj w) derivative of -(w - z0)^-2 conj(w - z0)^-1,
    # so the complement integral reduces to a contour integral over dOmega.
    rule = domain.quadrature()
    a = rule.nodes - z0
    value = rule.contour_integral(1.0 / (a * a * np.conj(a))) / 2j
    return float(value.real)


def _ray_crossings(
    rings: list[tuple[ComplexArray, ComplexArray]], z0: complex, theta: float
) -> FloatArray:
    direction = complex(math.cos(theta), math.sin(theta))
    hits = []
    for start, edge in rings:
        q = start - z0
        denom = np.imag(np.conj(direction) * edge)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.imag(np.conj(q) * edge) / denom
            s = np.imag(np.conj(q) * direction) / denom
        keep = (denom != 0.0) & (s >= 0.0) & (s < 1.0) & (r > 0.0)
        hits.append(r[keep])
    return np.sort(np.concatenate(hits))


def _complement_polar(domain: PlanarDomain, z0: complex, abs_tol: float) -> float:
    resolution = domain.config.polyline_resolution
    rings = []
    for component in domain.components:
        ring = component.curve.polyline(resolution)
        rings.append((ring, np.roll(ring, -1) - ring))
    radius = 10.0 * (domain.diameter + abs(z0 - domain.centroid))

    def radial(theta: float) -> float:
        crossings = _ray_crossings(rings, z0, theta)
        # complement intervals along the ray are [r1, r2], [r3, r4], ..., [r_last, R]
        bounds = np.append(crossings[crossings < radius], radius)
        if bounds.size % 2:
            # grazing ray (measure zero)
            bounds = np.append(bounds, radius)
        inner, outer = bounds[0::2], bounds[1::2]
        return float(0.5 * np.sum(inner**-2.0 - outer**-2.0))

    value, error = integrate.quad(radial, 0.0, 2.0 * math.pi, limit=2000, epsabs=abs_tol)
    if not math.isfinite(value) or error > 100.0 * abs_tol:
        raise ConvergenceError(
            "adaptive complement integration did not converge", residual=error, tolerance=abs_tol
        )
    return value + math.pi / radius**2


def inverted_complement_volume(
    spec: DomainSpec,
    z0: complex,
    method: ComplementMethod = "boundary",
    config: QuadratureConfig | None = None,
    abs_tol: float = 1e-9,
) -> float:
    """Volume of the complement of Omega under the inversion w -> 1/(w - z0).

    Equals the integral of |w - z0|^-4 over the plane minus Omega.

    Args:
        spec: Domain specification.
        z0: Inversion center, inside Omega.
        method: ``boundary`` (contour reduction) or ``polar`` (adaptive ray integration).
        config: Quadrature settings.
        abs_tol: Absolute target of the polar integration.

    Returns:
        float: The inverted complement volume.

    Raises:
        DomainMembershipError: If z0 is not in Omega.
        ConvergenceError: If the polar integration misses its target.
    """
    domain = planar_domain(spec, config)
    domain.require_interior(z0)
    if method == "boundary":
        value = _complement_boundary(domain, z0)
    else:
        value = _complement_polar(domain, z0, abs_tol)
    logger.debug(
        "Inverted complement volume",
        extra={"method": method, "pole": [z0.real, z0.imag], "value": value},
    )
    return value
