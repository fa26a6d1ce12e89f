"""Bergman and Szego kernels on the diagonal, analytic capacity and its bounds.

Every kernel value is the reciprocal of a constrained minimum norm over the
holomorphic basis of ``services.basis``: the Bergman norm is the area norm,
reduced to a boundary integral through single-valued conjugate
antiderivatives; the Szego norm is the arclength norm on the boundary.
Analytic capacity is 2 pi times the Szego kernel, bracketed between the
Ahlfors-Beurling bound and the logarithmic capacity.
"""

import logging
import math
import time
from collections.abc import Sequence
from typing import Literal

import numpy as np

from conformal_rigidity.config.settings import RunConfig, get_run_config
from conformal_rigidity.geometry.measures import inverted_complement_volume, planar_domain
from conformal_rigidity.geometry.planar import PlanarDomain
from conformal_rigidity.geometry.quadrature import ComplexArray, QuadratureRule
from conformal_rigidity.models.domain import (
    Annulus,
    Disk,
    DomainSpec,
    Polygon,
    RoundedPolygon,
    base_of,
    hole_count,
    punctures_of,
)
from conformal_rigidity.models.errors import (
    ArgumentError,
    ChainOrderingError,
    ConfigurationError,
    ConformalRigidityError,
    DomainMembershipError,
    GeometryError,
    UnsupportedConfigurationError,
)
from conformal_rigidity.models.results import (
    BasisDescriptor,
    CapacityBracket,
    HigherOrderBounds,
    KernelKind,
    KernelResult,
    StabilityPoint,
)
from conformal_rigidity.observability.metrics import metrics
from conformal_rigidity.observability.tracing import trace_sync
from conformal_rigidity.services.basis import (
    conjugate_antiderivatives,
    evaluate_holomorphic,
    holomorphic_basis,
    terms,
)
from conformal_rigidity.services.green import log_capacity, solve_green
from conformal_rigidity.services.linalg import GramSystem

logger = logging.getLogger(__name__)

PUNCTURE_NOTE = "punctures are removable for the kernel spaces; computed on the base domain"


def bergman_gram(descriptor: BasisDescriptor, rule: QuadratureRule) -> ComplexArray:
    """Area Gram matrix A[k, j] = <u_j, u_k> from boundary quadrature.

    Uses (1/2i) times the contour integral of Psi_k u_j, where Psi_k is a
    single-valued function with d Psi_k / d(conj z) = conj(u_k).
    """
    phi = terms(descriptor, rule.nodes)
    psi = conjugate_antiderivatives(descriptor, rule.nodes)
    gram: ComplexArray = (psi * rule.dz[:, None]).T @ phi / 2j
    return gram


def szego_samples(descriptor: BasisDescriptor, rule: QuadratureRule) -> ComplexArray:
    """Weighted samples M with M^H M the arclength Gram matrix."""
    samples: ComplexArray = np.sqrt(rule.weights)[:, None] * terms(descriptor, rule.nodes)
    return samples


def _gram_system(
    kind: KernelKind, descriptor: BasisDescriptor, rule: QuadratureRule, cutoff: float
) -> GramSystem:
    if kind == KernelKind.SZEGO:
        return GramSystem.from_samples(szego_samples(descriptor, rule), cutoff)
    return GramSystem.from_gram(bergman_gram(descriptor, rule), cutoff)


def _prepare(
    spec: DomainSpec, z0: complex, basis_size: int | None, cfg: RunConfig
) -> tuple[PlanarDomain, BasisDescriptor]:
    size = cfg.solver.basis_size if basis_size is None else basis_size
    if size < 1:
        raise ConfigurationError("basis_size must be positive", {"basis_size": size})
    domain = planar_domain(spec, cfg.quadrature)
    domain.require_interior(z0)
    return domain, holomorphic_basis(domain, size, cfg.solver)


def _extremal(
    kind: KernelKind,
    spec: DomainSpec,
    z0: complex,
    order: int,
    basis_size: int | None,
    cfg: RunConfig,
) -> KernelResult:
    start = time.perf_counter()
    z0 = complex(z0)
    domain, descriptor = _prepare(spec, z0, basis_size, cfg)
    try:
        rule = domain.quadrature()
        system = _gram_system(kind, descriptor, rule, cfg.solver.singular_value_cutoff)
        constraints = np.vstack(
            [terms(descriptor, np.array([z0]), order=k)[0] for k in range(order + 1)]
        )
        minimum, witness = system.constrained_minimum(constraints, order)
    except ConformalRigidityError:
        metrics.increment_solve(kind=kind.value, status="error")
        raise
    elapsed = time.perf_counter() - start
    metrics.increment_solve(kind=kind.value, status="success")
    metrics.observe_solve_duration(kind=kind.value, duration=elapsed)
    metrics.set_condition(kind=kind.value, condition=system.condition)
    logger.info(
        "Solved kernel",
        extra={
            "kernel": kind.value,
            "order": order,
            "point": [z0.real, z0.imag],
            "basis_size": descriptor.size,
            "condition": system.condition,
            "duration": round(elapsed, 4),
        },
    )
    return KernelResult(
        kind=kind,
        order=order,
        domain=spec,
        point=z0,
        value=1.0 / minimum,
        basis=descriptor,
        basis_size=descriptor.size,
        condition=system.condition,
        witness=tuple(complex(c) for c in witness),
        notes=(PUNCTURE_NOTE,) if punctures_of(spec) else (),
    )


@trace_sync(operation="bergman_kernel")
def bergman_kernel(
    spec: DomainSpec,
    z0: complex,
    basis_size: int | None = None,
    config: RunConfig | None = None,
) -> KernelResult:
    """Bergman kernel K(z0) = 1 / min{||f||^2 : f(z0) = 1}.

    Args:
        spec: Domain specification.
        z0: Interior point.
        basis_size: Number of interior powers (configured default when None).
        config: Run configuration (global configuration when None).

    Returns:
        KernelResult: Value, condition estimate and witness with g(z0) = 1.

    Raises:
        DomainMembershipError: If z0 is not in the domain.
        ConditioningError: If the Gram matrix is numerically singular.
    """
    cfg = config or get_run_config()
    return _extremal(KernelKind.BERGMAN, spec, z0, 0, basis_size, cfg)


@trace_sync(operation="higher_bergman")
def higher_bergman(
    spec: DomainSpec,
    z0: complex,
    j: int,
    basis_size: int | None = None,
    config: RunConfig | None = None,
) -> KernelResult:
    """Order-j Bergman kernel sup{|f^(j)(z0)|^2 : ||f|| <= 1, f^(k)(z0) = 0 for k < j}.

    Raises:
        ArgumentError: If j is negative.
        ConfigurationError: If j + 2 exceeds the basis size.
    """
    cfg = config or get_run_config()
    if j < 0:
        raise ArgumentError("derivative order must be nonnegative", {"j": j})
    size = cfg.solver.basis_size if basis_size is None else basis_size
    if j + 2 > size:
        raise ConfigurationError(
            "basis too small for the derivative constraints", {"j": j, "basis_size": size}
        )
    kind = KernelKind.BERGMAN if j == 0 else KernelKind.HIGHER_BERGMAN
    return _extremal(kind, spec, z0, j, size, cfg)


@trace_sync(operation="szego_kernel")
def szego_kernel(
    spec: DomainSpec,
    z0: complex,
    basis_size: int | None = None,
    config: RunConfig | None = None,
) -> KernelResult:
    """Szego kernel S(z0) = 1 / min{||f||^2 on the boundary : f(z0) = 1}."""
    cfg = config or get_run_config()
    return _extremal(KernelKind.SZEGO, spec, z0, 0, basis_size, cfg)


def evaluate_witness(result: KernelResult, z: ComplexArray | complex) -> ComplexArray:
    """Evaluate the extremal function of a kernel result."""
    return evaluate_holomorphic(
        result.basis, np.asarray(result.witness, dtype=complex), np.atleast_1d(z)
    )


def witness_norm(
    result: KernelResult, refinement: int = 2, config: RunConfig | None = None
) -> float:
    """Norm squared of the witness on a refined boundary quadrature.

    The refined rule is independent of the one used by the solve, so
    1 / witness_norm cross-validates the kernel value.
    """
    cfg = config or get_run_config()
    domain = planar_domain(result.domain, cfg.quadrature)
    rule = domain.quadrature(refinement * cfg.quadrature.nodes_per_component)
    c = np.asarray(result.witness, dtype=complex)
    if result.kind == KernelKind.SZEGO:
        values = evaluate_holomorphic(result.basis, c, rule.nodes)
        return float(np.sum(np.abs(values) ** 2 * rule.weights))
    gram = bergman_gram(result.basis, rule)
    return float(np.vdot(c, gram @ c).real)


def ahlfors_map_from_szego(
    result: KernelResult, z: ComplexArray | complex, nodes: int = 48
) -> ComplexArray:
    """Riemann map F with F(z0) = 0, F'(z0) > 0 from the Szego witness.

    On simply connected domains S(z, z0)^2 = F'(z) F'(z0) / (4 pi^2), hence
    F'(z) = 2 pi S(z0) g(z)^2 with g the witness; F is integrated along the
    segment [z0, z] by Gauss-Legendre quadrature.

    Raises:
        UnsupportedConfigurationError: For non-Szego results or multiply connected domains.
        GeometryError: If a segment leaves the domain.
    """
    if result.kind != KernelKind.SZEGO:
        raise UnsupportedConfigurationError("Riemann map needs a Szego result")
    if hole_count(result.domain):
        raise UnsupportedConfigurationError("Riemann map needs a simply connected domain")
    points = np.atleast_1d(np.asarray(z, dtype=complex))
    x, w = np.polynomial.legendre.leggauss(nodes)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    path = result.point + (points[:, None] - result.point) * x[None, :]
    domain = planar_domain(result.domain)
    if not np.all(domain.contains(path.ravel())):
        raise GeometryError("segment from the pole leaves the domain")
    g = evaluate_witness(result, path.ravel()).reshape(path.shape)
    integral = (g**2 @ w) * (points - result.point)
    mapped: ComplexArray = 2.0 * math.pi * result.value * integral
    return mapped


@trace_sync(operation="ahlfors_beurling_bound")
def ahlfors_beurling_bound(
    spec: DomainSpec, z0: complex, config: RunConfig | None = None
) -> float:
    """sqrt(v(inverted complement) / pi), a lower bound of analytic capacity."""
    cfg = config or get_run_config()
    return math.sqrt(inverted_complement_volume(spec, complex(z0), config=cfg.quadrature) / math.pi)


def ab_extremal_eval(
    spec: DomainSpec, z0: complex, z: complex, config: RunConfig | None = None
) -> complex:
    """Evaluate the Ahlfors-Beurling extremal function at z.

    f(z) = (pi V)^(-1/2) times the integral over the inverted complement E of
    dv(w) / (w - 1/(z - z0)), V = v(E). Substituting w = 1/(zeta - z0) and
    integrating by parts gives
    f(z) = b / (2i sqrt(pi V)) times the contour integral of
    d zeta / (a conj(a) (b - a)), with a = zeta - z0 and b = z - z0.
    The 1/(b - a) singularity is subtracted; boundary nodes take the limit
    from inside.

    Args:
        spec: Domain specification.
        z0: Interior point; f(z0) = 0 and f'(z0) = -sqrt(V / pi).
        z: Interior point or boundary quadrature node.
        config: Run configuration (global configuration when None).

    Returns:
        complex: f(z), of modulus at most one.

    Raises:
        DomainMembershipError: If z is neither in the domain nor a boundary node.
    """
    cfg = config or get_run_config()
    z0, z = complex(z0), complex(z)
    domain = planar_domain(spec, cfg.quadrature)
    domain.require_interior(z0)
    if z == z0:
        return 0j
    rule = domain.quadrature()
    volume = inverted_complement_volume(spec, z0, config=cfg.quadrature)
    a = rule.nodes - z0

    gaps = np.abs(rule.nodes - z)
    nearest = int(np.argmin(gaps))
    on_boundary = bool(gaps[nearest] <= 1e-9 * domain.diameter)
    if not on_boundary and not bool(domain.contains(z)[0]):
        raise DomainMembershipError("evaluation point lies outside the closed domain", point=z)

    b = a[nearest] if on_boundary else z - z0
    h = 1.0 / np.abs(a) ** 2
    hb = 1.0 / abs(b) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        smooth = (h - hb) / (b - a)
    if on_boundary:
        # the subtracted integrand is continuous along the boundary
        tau = rule.tangents[nearest]
        smooth[nearest] = 2.0 * (np.conj(b) * tau).real / (tau * abs(b) ** 4)
    # the volume integral is continuous up to the boundary, so boundary values
    # take the interior limit of the Cauchy integral of hb
    integral = np.sum(smooth * rule.dz) - 2j * math.pi * hb
    return complex(b * integral / 2j / math.sqrt(math.pi * volume))


@trace_sync(operation="analytic_capacity")
def analytic_capacity(
    spec: DomainSpec,
    z0: complex,
    basis_size: int | None = None,
    config: RunConfig | None = None,
    enforce: bool = True,
) -> CapacityBracket:
    """Analytic capacity c_B = 2 pi S bracketed by the AB bound and c_beta.

    Args:
        spec: Domain specification.
        z0: Interior point.
        basis_size: Kernel basis size (configured default when None).
        config: Run configuration (global configuration when None).
        enforce: Raise when the bracket is out of order.

    Returns:
        CapacityBracket: lower <= central <= upper.

    Raises:
        ChainOrderingError: If ``enforce`` and the bracket is out of order.
    """
    cfg = config or get_run_config()
    szego = szego_kernel(spec, z0, basis_size, cfg)
    central = 2.0 * math.pi * szego.value
    volume = inverted_complement_volume(spec, complex(z0), config=cfg.quadrature)
    lower = math.sqrt(volume / math.pi)
    upper = log_capacity(solve_green(spec, z0, config=cfg))
    bracket = CapacityBracket(
        lower=lower,
        central=central,
        upper=upper,
        szego_volume_gap=szego.value**2 - volume / (4.0 * math.pi**3),
    )
    if enforce and not bracket.is_ordered(cfg.chain.chain_rel_tol):
        raise ChainOrderingError(
            "capacity bracket out of order",
            violations=[f"lower={lower:.12g}", f"central={central:.12g}", f"upper={upper:.12g}"],
        )
    return bracket


def higher_order_bounds(
    spec: DomainSpec,
    z0: complex,
    j: int,
    basis_size: int | None = None,
    config: RunConfig | None = None,
) -> HigherOrderBounds:
    """K^(j)(z0) with its lower bounds from c_beta and from the area."""
    cfg = config or get_run_config()
    value = higher_bergman(spec, z0, j, basis_size, cfg).value
    factor = math.factorial(j) * math.factorial(j + 1)
    c_beta = log_capacity(solve_green(spec, z0, config=cfg))
    capacity_bound = factor / math.pi * c_beta ** (2 * j + 2)
    volume_bound = factor * math.pi**j / planar_domain(spec, cfg.quadrature).area ** (j + 1)
    return HigherOrderBounds(
        order=j,
        value=value,
        capacity_bound=capacity_bound,
        volume_bound=volume_bound,
        capacity_gap=value - capacity_bound,
        volume_gap=value - volume_bound,
    )


def kernel_convergence(
    spec: DomainSpec,
    z0: complex,
    kind: Literal["bergman", "szego"],
    sizes: Sequence[int],
    config: RunConfig | None = None,
) -> list[KernelResult]:
    """Kernel values over increasing basis sizes (non-decreasing up to conditioning)."""
    cfg = config or get_run_config()
    solve = szego_kernel if kind == "szego" else bergman_kernel
    return [solve(spec, z0, size, cfg) for size in sizes]


@trace_sync(operation="szego_stability_sweep")
def szego_stability_sweep(
    spec: DomainSpec,
    rounding_radii: Sequence[float],
    z0: complex,
    basis_size: int | None = None,
    config: RunConfig | None = None,
) -> list[StabilityPoint]:
    """Szego kernel on corner-rounded approximants of a polygon.

    Non-polygonal specs have no corners; every radius then reports the kernel
    of the spec itself.

    Raises:
        ArgumentError: If the radii are not positive and strictly decreasing.
        GeometryError: If a radius does not fit the polygon's edges.
    """
    cfg = config or get_run_config()
    radii = [float(r) for r in rounding_radii]
    decreasing = all(b < a for a, b in zip(radii, radii[1:], strict=False))
    if not radii or min(radii) <= 0.0 or not decreasing:
        raise ArgumentError("rounding radii must be positive and decreasing", {"radii": radii})
    base = base_of(spec)
    if not isinstance(base, Polygon):
        value = szego_kernel(spec, z0, basis_size, cfg).value
        return [StabilityPoint(radius=r, value=value) for r in radii]
    points = []
    for radius in radii:
        rounded = RoundedPolygon(vertices=base.vertices, radius=radius)
        try:
            value = szego_kernel(rounded, z0, basis_size, cfg).value
        except DomainMembershipError as e:
            raise GeometryError(
                "pole lies outside a rounded approximant", {"radius": radius}
            ) from e
        points.append(StabilityPoint(radius=radius, value=value))
        logger.debug("Rounded Szego kernel", extra={"radius": radius, "value": value})
    return points


def _laurent_range(terms_each_side: int) -> np.ndarray:
    return np.arange(-terms_each_side, terms_each_side + 1)


def annulus_bergman(spec: Annulus, z0: complex, terms_each_side: int = 400) -> float:
    """Bergman kernel of an annulus from its orthogonal Laurent monomials.

    On rho < |w| < 1, ||w^n||^2 = pi (1 - rho^(2n+2)) / (n+1) and
    ||1/w||^2 = 2 pi log(1/rho); the kernel scales as 1/R^2.
    """
    rho = spec.r_inner / spec.r_outer
    w = abs(complex(z0) - spec.center) / spec.r_outer
    if not rho < w < 1.0:
        raise DomainMembershipError("point lies outside the annulus", point=complex(z0))
    n = _laurent_range(terms_each_side)
    n = n[n != -1]
    # log |1 - rho^(2n+2)| without cancellation on either side of n = -1
    x = (2 * n + 2) * math.log(rho)
    log_gap = np.where(x < 0.0, np.log(-np.expm1(np.minimum(x, -1e-300))), 0.0)
    log_gap = np.where(x > 0.0, x + np.log(-np.expm1(-np.maximum(x, 1e-300))), log_gap)
    log_terms = 2 * n * math.log(w) + np.log(np.abs(n + 1)) - math.log(math.pi) - log_gap
    reciprocal = 1.0 / (2.0 * math.pi * math.log(1.0 / rho) * w * w)
    return (float(np.sum(np.exp(log_terms))) + reciprocal) / spec.r_outer**2


def annulus_szego(spec: Annulus, z0: complex, terms_each_side: int = 400) -> float:
    """Szego kernel of an annulus from its orthogonal Laurent monomials.

    With arclength on both circles, ||w^n||^2 = 2 pi (1 + rho^(2n+1)); the
    kernel scales as 1/R.
    """
    rho = spec.r_inner / spec.r_outer
    w = abs(complex(z0) - spec.center) / spec.r_outer
    if not rho < w < 1.0:
        raise DomainMembershipError("point lies outside the annulus", point=complex(z0))
    n = _laurent_range(terms_each_side)
    # w^(2n) / (1 + rho^(2n+1)) written in logs so neither side overflows
    log_num = 2 * n * math.log(w)
    log_den = np.logaddexp(0.0, (2 * n + 1) * math.log(rho))
    return float(np.sum(np.exp(log_num - log_den))) / (2.0 * math.pi * spec.r_outer)


def disk_mobius(spec: Disk, z0: complex, z: ComplexArray) -> ComplexArray:
    """Disk automorphism r (z - z0) / (r^2 - conj(z0 - z1)(z - z1)) onto the unit disk."""
    r, z1 = spec.radius, spec.center
    mapped: ComplexArray = r * (z - z0) / (r * r - np.conj(z0 - z1) * (z - z1))
    return mapped
