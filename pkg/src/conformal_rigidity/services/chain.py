"""Inequality chains, equality detection and rigidity diagnosis.

The chain at a point z0 reads

    1/delta^2 >= pi K >= c_beta^2 >= c_B^2 >= pi/v >= (2 pi/sigma)^2

with c_B^2 reported twice: as (2 pi S)^2 from the Szego solve and from the
witness norm on a refined quadrature. Every pair that meets within tolerance
is mapped to the statement whose equality case it is, and the probe checks
the claimed geometry against the domain.
"""

import logging
import math
from collections.abc import Callable
from typing import TypeVar

import numpy as np
from scipy.optimize import least_squares

from conformal_rigidity.config.settings import RunConfig, get_run_config
from conformal_rigidity.geometry.measures import inverted_complement_volume, planar_domain
from conformal_rigidity.models.domain import DomainSpec, hole_count, punctures_of
from conformal_rigidity.models.errors import (
    ChainOrderingError,
    ConformalRigidityError,
    NumericalError,
)
from conformal_rigidity.models.results import (
    CHAIN_ORDER,
    CapacityBracket,
    ChainEntry,
    ChainGap,
    ChainReport,
    Conclusion,
    ConsistencyRecord,
    EqualityVerdict,
    GreenModel,
    ProbeReport,
    TheoremId,
)
from conformal_rigidity.observability.metrics import metrics
from conformal_rigidity.observability.tracing import trace_sync
from conformal_rigidity.services.green import green_value, log_capacity, solve_green
from conformal_rigidity.services.kernels import bergman_kernel, szego_kernel, witness_norm
from conformal_rigidity.services.sublevel import bz_sweep

logger = logging.getLogger(__name__)

T = TypeVar("T")

E = ChainEntry

# (2 pi S)^2 and c_B^2 are one quantity computed twice
IDENTITY_PAIR = (E.TWO_PI_S_SQ, E.CB_SQ)

# non-simply-connected domains come closest to equality on this pair (about 1e-5
# relative on a 1:4 annulus), so it is judged with its own tighter tolerance
SUITA_PAIR = (E.PI_K, E.CBETA_SQ)

_VOLUME_THEOREM = {
    E.INV_DELTA_SQ: TheoremId.BERGMAN_VOLUME,
    E.PI_K: TheoremId.BERGMAN_VOLUME,
    E.CBETA_SQ: TheoremId.LOG_CAPACITY_VOLUME,
    E.TWO_PI_S_SQ: TheoremId.ANALYTIC_CAPACITY_VOLUME,
    E.CB_SQ: TheoremId.ANALYTIC_CAPACITY_VOLUME,
}

EQUALITY_THEOREMS: dict[tuple[ChainEntry, ChainEntry], tuple[TheoremId, Conclusion]] = {
    (E.INV_DELTA_SQ, E.PI_K): (TheoremId.BERGMAN_DELTA, Conclusion.DISK_CENTERED),
    (E.INV_DELTA_SQ, E.CBETA_SQ): (TheoremId.DELTA_CAPACITY, Conclusion.DISK_CENTERED),
    (E.INV_DELTA_SQ, E.TWO_PI_S_SQ): (TheoremId.SZEGO_RIGIDITY, Conclusion.DISK_CENTERED),
    (E.INV_DELTA_SQ, E.CB_SQ): (TheoremId.SZEGO_RIGIDITY, Conclusion.DISK_CENTERED),
    (E.INV_DELTA_SQ, E.ISOPER): (TheoremId.ISOPERIMETRIC, Conclusion.DISK_CENTERED),
    (E.PI_K, E.CBETA_SQ): (TheoremId.SUITA, Conclusion.SIMPLY_CONNECTED),
    (E.PI_K, E.TWO_PI_S_SQ): (TheoremId.SZEGO_RIGIDITY, Conclusion.SIMPLY_CONNECTED),
    (E.PI_K, E.CB_SQ): (TheoremId.SZEGO_RIGIDITY, Conclusion.SIMPLY_CONNECTED),
    (E.CBETA_SQ, E.TWO_PI_S_SQ): (TheoremId.CAPACITY_RIGIDITY, Conclusion.SIMPLY_CONNECTED),
    (E.CBETA_SQ, E.CB_SQ): (TheoremId.CAPACITY_RIGIDITY, Conclusion.SIMPLY_CONNECTED),
    (E.PI_OVER_V, E.ISOPER): (TheoremId.ISOPERIMETRIC, Conclusion.DISK),
    **{(upper, E.PI_OVER_V): (theorem, Conclusion.DISK_CENTERED)
       for upper, theorem in _VOLUME_THEOREM.items()},
    **{(upper, E.ISOPER): (theorem, Conclusion.DISK_CENTERED)
       for upper, theorem in _VOLUME_THEOREM.items() if upper != E.INV_DELTA_SQ},
}
"""Statement and conclusion met by equality of each ordered pair (upper, lower)."""


def chain_pairs() -> list[tuple[ChainEntry, ChainEntry]]:
    """Every ordered pair of chain entries except the identity pair."""
    return [
        (upper, lower)
        for i, upper in enumerate(CHAIN_ORDER)
        for lower in CHAIN_ORDER[i + 1 :]
        if (upper, lower) != IDENTITY_PAIR
    ]


def _relative(upper: float, lower: float) -> float:
    return (upper - lower) / max(abs(upper), abs(lower))


def pair_tolerance(
    pair: tuple[ChainEntry, ChainEntry], rel_tol: float, suita_rel_tol: float | None = None
) -> float:
    """Equality tolerance applied to one ordered pair."""
    if pair == SUITA_PAIR and suita_rel_tol is not None:
        return min(rel_tol, suita_rel_tol)
    return rel_tol


def _entry(name: str, compute: Callable[[], T]) -> T:
    try:
        return compute()
    except ConformalRigidityError as e:
        e.details["entry"] = name
        raise


@trace_sync(operation="compute_chain")
def compute_chain(
    spec: DomainSpec,
    z0: complex,
    config: RunConfig | None = None,
    name: str | None = None,
) -> ChainReport:
    """Assemble the full inequality chain at z0.

    Ordering violations are recorded on the report, never clamped; use
    ``require_ordered`` to turn them into an error.

    Args:
        spec: Domain specification.
        z0: Interior point.
        config: Run configuration (global configuration when None).
        name: Optional label carried into the report.

    Returns:
        ChainReport: Entries, capacity bracket, pairwise gaps, verdicts and diagnostics.

    Raises:
        ConformalRigidityError: From any constituent solve, with ``details["entry"]``
            naming the entry being computed.
    """
    cfg = config or get_run_config()
    z0 = complex(z0)
    domain = _entry("domain", lambda: planar_domain(spec, cfg.quadrature))
    delta = _entry(E.INV_DELTA_SQ.value, lambda: domain.dist_boundary(z0))
    model = _entry(E.CBETA_SQ.value, lambda: solve_green(spec, z0, config=cfg))
    bergman = _entry(E.PI_K.value, lambda: bergman_kernel(spec, z0, config=cfg))
    szego = _entry(E.TWO_PI_S_SQ.value, lambda: szego_kernel(spec, z0, config=cfg))
    refined = _entry(E.CB_SQ.value, lambda: witness_norm(szego, config=cfg))
    volume = _entry("ahlfors_beurling", lambda: inverted_complement_volume(
        spec, z0, config=cfg.quadrature
    ))

    c_beta = log_capacity(model)
    central = 2.0 * math.pi * szego.value
    entries = {
        E.INV_DELTA_SQ: 1.0 / delta**2,
        E.PI_K: math.pi * bergman.value,
        E.CBETA_SQ: c_beta**2,
        E.TWO_PI_S_SQ: central**2,
        E.CB_SQ: (2.0 * math.pi / refined) ** 2,
        E.PI_OVER_V: math.pi / domain.area,
        E.ISOPER: (2.0 * math.pi / domain.perimeter) ** 2,
    }
    bracket = CapacityBracket(
        lower=math.sqrt(volume / math.pi),
        central=central,
        upper=c_beta,
        szego_volume_gap=szego.value**2 - volume / (4.0 * math.pi**3),
    )

    chain_tol = cfg.chain.chain_rel_tol
    equality_tol = cfg.chain.equality_rel_tol
    gaps, violations = [], []
    for upper, lower in [*chain_pairs(), IDENTITY_PAIR]:
        rel_gap = _relative(entries[upper], entries[lower])
        gaps.append(
            ChainGap(
                upper=upper,
                lower=lower,
                gap=entries[upper] - entries[lower],
                rel_gap=rel_gap,
                equal=abs(rel_gap)
                <= pair_tolerance((upper, lower), equality_tol, cfg.chain.suita_rel_tol),
            )
        )
        if (upper, lower) == IDENTITY_PAIR:
            if abs(rel_gap) > chain_tol:
                violations.append(f"{upper.value} != {lower.value} (rel {rel_gap:.3e})")
        elif rel_gap < -chain_tol:
            violations.append(f"{upper.value} < {lower.value} (rel {rel_gap:.3e})")
    if not bracket.is_ordered(chain_tol):
        violations.append("capacity bracket out of order")

    notes = list(model.notes)
    if punctures_of(spec):
        notes.append(f"{len(punctures_of(spec))} puncture(s) ignored as polar sets")
    report = ChainReport(
        name=name,
        domain=spec,
        point=z0,
        entries=entries,
        bracket=bracket,
        gaps=gaps,
        verdicts=[],
        violations=violations,
        diagnostics={
            "green_residual": model.residual,
            "bergman_condition": bergman.condition,
            "szego_condition": szego.condition,
            "bergman_szego_ratio": entries[E.PI_K] / entries[E.TWO_PI_S_SQ],
            "delta_capacity_gap": 1.0 / delta - c_beta,
            "modulus_defect": green_modulus_defect(model, spec, cfg),
        },
        notes=notes,
        sweep=bz_sweep(model, config=cfg) if cfg.chain.include_sweep else None,
    )
    report = report.model_copy(
        update={
            "verdicts": detect_equalities(report, equality_tol, cfg.chain.suita_rel_tol)
        }
    )
    if violations:
        metrics.increment_chain_violations(len(violations))
        logger.warning("Chain ordering violated", extra={"violations": violations})
    logger.info(
        "Computed chain",
        extra={"kind": spec.kind, "pole": [z0.real, z0.imag], "verdicts": len(report.verdicts)},
    )
    return report


def require_ordered(report: ChainReport) -> None:
    """Raise if the report records ordering violations.

    Raises:
        ChainOrderingError: Listing every violation.
    """
    if report.violations:
        raise ChainOrderingError("inequality chain out of order", violations=report.violations)


def detect_equalities(
    report: ChainReport, rel_tol: float, suita_rel_tol: float | None = None
) -> list[EqualityVerdict]:
    """Verdicts for every pair of entries equal within ``rel_tol``.

    The (piK, cbeta_sq) pair uses the smaller of ``rel_tol`` and ``suita_rel_tol``.
    A sweep with equal ends adds the sublevel rigidity verdict. Shrinking
    either tolerance never adds a verdict.
    """
    verdicts = []
    for upper, lower in chain_pairs():
        rel_gap = _relative(report.entries[upper], report.entries[lower])
        if abs(rel_gap) <= pair_tolerance((upper, lower), rel_tol, suita_rel_tol):
            theorem, conclusion = EQUALITY_THEOREMS[(upper, lower)]
            verdicts.append(
                EqualityVerdict(
                    upper=upper,
                    lower=lower,
                    theorem=theorem,
                    conclusion=conclusion,
                    rel_gap=rel_gap,
                )
            )
    if report.sweep is not None and report.sweep.spread <= rel_tol:
        verdicts.append(
            EqualityVerdict(
                upper=E.CBETA_SQ,
                lower=E.PI_OVER_V,
                theorem=TheoremId.SUBLEVEL_RIGIDITY,
                conclusion=Conclusion.DISK_CENTERED,
                rel_gap=report.sweep.spread,
            )
        )
    return verdicts


def _radial_spread(nodes: np.ndarray, center: complex) -> float:
    distances = np.abs(nodes - center)
    return float((distances.max() - distances.min()) / distances.max())


def rigidity_probe(
    spec: DomainSpec,
    z0: complex,
    verdicts: list[EqualityVerdict],
    config: RunConfig | None = None,
) -> ProbeReport:
    """Check each verdict's conclusion against the geometry of the spec.

    "disk centered at z0" requires no holes and boundary nodes equidistant from
    z0; "disk" requires the same about the centroid; "simply connected"
    requires no holes. Punctures are polar and do not count.
    """
    cfg = config or get_run_config()
    domain = planar_domain(spec, cfg.quadrature)
    nodes = domain.quadrature().nodes
    holes = hole_count(spec)
    records = []
    for verdict in verdicts:
        if verdict.conclusion == Conclusion.SIMPLY_CONNECTED:
            measure = float(holes)
            agrees = holes == 0
            detail = f"{holes} hole(s)"
        else:
            centered = verdict.conclusion == Conclusion.DISK_CENTERED
            center = complex(z0) if centered else domain.centroid
            measure = _radial_spread(nodes, center)
            agrees = holes == 0 and measure <= 1e-6
            detail = f"relative radial spread {measure:.3e} about {center:.6g}, {holes} hole(s)"
        records.append(
            ConsistencyRecord(
                theorem=verdict.theorem,
                conclusion=verdict.conclusion,
                agrees=agrees,
                measure=measure,
                detail=detail,
            )
        )
        if not agrees:
            logger.warning(
                "Verdict disagrees with geometry",
                extra={"theorem": verdict.theorem.value, "measure": measure},
            )
    return ProbeReport(records=records)


def _circumcircle(a: complex, b: complex, c: complex) -> tuple[complex, float]:
    # center equidistant from the three points: solve the 2x2 linear system
    matrix = np.array([[(b - a).real, (b - a).imag], [(c - a).real, (c - a).imag]])
    rhs = 0.5 * np.array([abs(b) ** 2 - abs(a) ** 2, abs(c) ** 2 - abs(a) ** 2])
    x, y = np.linalg.solve(matrix, rhs)
    center = complex(x, y)
    return center, abs(a - center)


def green_modulus_defect(
    model: GreenModel, spec: DomainSpec, config: RunConfig | None = None
) -> float:
    """Distance of exp(G) from the modulus of the best Moebius map vanishing at z0.

    Fits h(z) = (z - z0) / (c z + d) by Levenberg-Marquardt on interior probes
    and boundary nodes, seeded with the disk automorphism of the circle through
    three boundary nodes, and returns max | |h| - exp(G) |. Zero exactly on
    disks (less polar sets).

    Raises:
        NumericalError: If the fit degenerates.
    """
    cfg = config or get_run_config()
    domain = planar_domain(spec, cfg.quadrature)
    z0 = model.pole
    rng = np.random.default_rng(cfg.output.seed)
    boundary = domain.quadrature().nodes
    step = max(1, boundary.size // 256)
    probes = np.concatenate(
        [domain.interior_samples(cfg.chain.probe_count, rng), boundary[::step]]
    )
    target = np.exp(green_value(model, probes))

    outer = domain.outer.polyline(cfg.quadrature.polyline_resolution)
    try:
        z1, r = _circumcircle(outer[0], outer[outer.size // 3], outer[2 * outer.size // 3])
    except np.linalg.LinAlgError as e:
        raise NumericalError("degenerate seed for the Moebius fit") from e
    seed_c = -np.conj(z0 - z1) / r
    seed_d = (r * r + np.conj(z0 - z1) * z1) / r

    def residual(p: np.ndarray) -> np.ndarray:
        c, d = complex(p[0], p[1]), complex(p[2], p[3])
        return np.abs((probes - z0) / (c * probes + d)) - target

    fit = least_squares(
        residual, np.array([seed_c.real, seed_c.imag, seed_d.real, seed_d.imag]), method="lm"
    )
    if not np.all(np.isfinite(fit.fun)):
        raise NumericalError("Moebius fit diverged", {"status": int(fit.status)})
    defect = float(np.max(np.abs(fit.fun)))
    logger.debug("Moebius defect", extra={"defect": defect, "evaluations": int(fit.nfev)})
    return defect
