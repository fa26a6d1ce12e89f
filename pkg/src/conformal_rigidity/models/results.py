"""Result models for solvers, sweeps, chains and regression runs.

Every model serializes to JSON with complex numbers written as ``[re, im]``
and re-parses into an equal object, so reports can be archived and diffed.
"""

from enum import StrEnum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from conformal_rigidity.models.domain import Complex, DomainSpec

SCHEMA_VERSION = 1


class HoleTerms(BaseModel):
    """Expansion terms attached to one hole."""

    model_config = ConfigDict(frozen=True)

    source: Complex = Field(..., description="Source point inside the hole")
    scale: float = Field(..., gt=0.0, description="Normalizing radius of the hole terms")
    degree: int = Field(..., ge=1, description="Highest inverse power")


class PoleTerm(BaseModel):
    """Rational term d / (z - p) with the pole outside the closed domain."""

    model_config = ConfigDict(frozen=True)

    pole: Complex
    scale: float = Field(..., gt=0.0, description="Distance from the pole to its corner")


class BasisDescriptor(BaseModel):
    """Layout of a harmonic or holomorphic expansion basis.

    The holomorphic terms are ((z - c)/s)^k, per hole (r/(z - a))^k for
    k = 1..hole degree, and each pole term. Powers run over k = 0..degree-1 in
    holomorphic bases. Harmonic bases use k = 1..degree and the real columns
    [1 | Re terms | Im terms | log|z - a| per hole].
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["harmonic", "holomorphic"]
    center: Complex
    scale: float = Field(..., gt=0.0)
    degree: int = Field(..., ge=1)
    holes: tuple[HoleTerms, ...] = ()
    poles: tuple[PoleTerm, ...] = ()

    @property
    def size(self) -> int:
        """Number of basis columns (real for harmonic, complex for holomorphic)."""
        if self.kind == "harmonic":
            return (
                1
                + 2 * self.degree
                + sum(1 + 2 * h.degree for h in self.holes)
                + 2 * len(self.poles)
            )
        return self.degree + sum(h.degree for h in self.holes) + len(self.poles)


class GreenModel(BaseModel):
    """Solved Green's function G(z, z0) = log|z - z0| + rho(z)."""

    model_config = ConfigDict(frozen=True)

    domain: DomainSpec
    pole: Complex
    basis: BasisDescriptor
    coefficients: tuple[float, ...] = Field(..., description="Harmonic basis coefficients")
    residual: float = Field(..., ge=0.0, description="Max |G| over boundary nodes")
    node_count: int = Field(..., ge=1)
    notes: tuple[str, ...] = ()


class KernelKind(StrEnum):
    """Reproducing kernel families."""

    BERGMAN = "bergman"
    HIGHER_BERGMAN = "higher_bergman"
    SZEGO = "szego"


class KernelResult(BaseModel):
    """On-diagonal kernel value with its extremal witness.

    The witness g minimizes the norm among basis functions with g^{(order)}(z0) = 1
    and vanishing lower derivatives; ``value`` is 1 / ||g||^2.
    """

    model_config = ConfigDict(frozen=True)

    kind: KernelKind
    order: int = Field(default=0, ge=0, description="Derivative order j")
    domain: DomainSpec
    point: Complex
    value: float = Field(..., gt=0.0)
    basis: BasisDescriptor
    basis_size: int = Field(..., ge=1)
    condition: float = Field(..., gt=0.0, description="Condition of the retained Gram spectrum")
    witness: tuple[Complex, ...] = Field(..., description="Witness coefficients")
    notes: tuple[str, ...] = ()


class CapacityBracket(BaseModel):
    """Ahlfors-Beurling bound <= c_B (as 2 pi S) <= c_beta."""

    lower: float = Field(..., gt=0.0, description="Ahlfors-Beurling bound")
    central: float = Field(..., gt=0.0, description="Analytic capacity as 2 pi S")
    upper: float = Field(..., gt=0.0, description="Logarithmic capacity c_beta")
    szego_volume_gap: float = Field(
        ..., description="S^2 - v(inverted complement)/(4 pi^3), nonnegative"
    )

    def is_ordered(self, rel_tol: float) -> bool:
        """Check lower <= central <= upper up to a relative tolerance."""
        return (
            self.lower <= self.central * (1.0 + rel_tol)
            and self.central <= self.upper * (1.0 + rel_tol)
        )


class DeltaCapacityCheck(BaseModel):
    """Comparison 1/delta(z0) >= c_beta(z0)."""

    delta_inv: float
    c_beta: float
    gap: float


class GreenReport(BaseModel):
    """Green solve with the capacity it yields."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    model: GreenModel
    c_beta: float = Field(..., gt=0.0, description="Logarithmic capacity at the pole")
    delta_capacity: DeltaCapacityCheck


class SublevelRecord(BaseModel):
    """One level of a sublevel sweep."""

    t: float
    volume: float
    f: float


class SublevelSweep(BaseModel):
    """f(t) = pi e^{2t} / v({G < t}) over a grid of levels, stored in increasing t."""

    pole: Complex
    records: list[SublevelRecord]
    monotone: bool
    violations: list[float] = Field(
        default_factory=list, description="Levels t_k with f(t_k) > f(t_{k-1}) beyond tolerance"
    )
    limit_zero_raw: float = Field(..., description="f at the level closest to 0")
    limit_zero: float = Field(..., description="Linear extrapolation of f to t = 0")
    limit_inf: float = Field(..., description="f at the most negative level")
    target_zero: float = Field(..., description="pi / v(Omega)")
    target_inf: float = Field(..., description="c_beta(z0)^2")
    limit_zero_ok: bool
    limit_inf_ok: bool

    @property
    def spread(self) -> float:
        """Relative difference between the two ends of the sweep."""
        first, last = self.records[0].f, self.records[-1].f
        return abs(first - last) / max(first, last)


class StabilityPoint(BaseModel):
    """Szego kernel value on one corner-rounded approximant."""

    radius: float
    value: float


class HigherOrderBounds(BaseModel):
    """Lower bounds of K^{(j)}(z0) from c_beta and from the volume."""

    order: int
    value: float
    capacity_bound: float = Field(..., description="j!(j+1)!/pi * c_beta^{2j+2}")
    volume_bound: float = Field(..., description="j!(j+1)! pi^j / v^{j+1}")
    capacity_gap: float
    volume_gap: float


class ChainEntry(StrEnum):
    """Entries of the inequality chain, from largest to smallest."""

    INV_DELTA_SQ = "inv_delta_sq"
    PI_K = "piK"
    CBETA_SQ = "cbeta_sq"
    TWO_PI_S_SQ = "two_pi_S_sq"
    CB_SQ = "cB_sq"
    PI_OVER_V = "pi_over_v"
    ISOPER = "isoper"


CHAIN_ORDER: tuple[ChainEntry, ...] = tuple(ChainEntry)


class TheoremId(StrEnum):
    """Equality statements that can fire on a chain report."""

    BERGMAN_DELTA = "bergman_delta"
    DELTA_CAPACITY = "delta_capacity"
    SUITA = "suita"
    CAPACITY_RIGIDITY = "capacity_rigidity"
    SZEGO_RIGIDITY = "szego_rigidity"
    ANALYTIC_CAPACITY_VOLUME = "analytic_capacity_volume"
    LOG_CAPACITY_VOLUME = "log_capacity_volume"
    BERGMAN_VOLUME = "bergman_volume"
    ISOPERIMETRIC = "isoperimetric"
    SUBLEVEL_RIGIDITY = "sublevel_rigidity"


class Conclusion(StrEnum):
    """Geometric conclusions of the equality statements."""

    DISK_CENTERED = "disk centered at z0"
    SIMPLY_CONNECTED = "simply connected"
    DISK = "disk"


class ChainGap(BaseModel):
    """Gap between two chain entries (upper minus lower)."""

    upper: ChainEntry
    lower: ChainEntry
    gap: float
    rel_gap: float
    equal: bool


class EqualityVerdict(BaseModel):
    """A near-equality and the statement whose equality case it meets."""

    upper: ChainEntry
    lower: ChainEntry
    theorem: TheoremId
    conclusion: Conclusion
    rel_gap: float


class ChainReport(BaseModel):
    """Full inequality chain at a point."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    name: str | None = None
    domain: DomainSpec
    point: Complex
    entries: dict[ChainEntry, float]
    bracket: CapacityBracket
    gaps: list[ChainGap]
    verdicts: list[EqualityVerdict]
    violations: list[str] = Field(default_factory=list)
    diagnostics: dict[str, float] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)
    sweep: SublevelSweep | None = None

    def entry(self, name: ChainEntry) -> float:
        """Value of one chain entry."""
        return self.entries[name]


class ConsistencyRecord(BaseModel):
    """Geometric check of one verdict's conclusion."""

    theorem: TheoremId
    conclusion: Conclusion
    agrees: bool
    measure: float = Field(..., description="Deviation measured by the probe")
    detail: str


class ProbeReport(BaseModel):
    """All consistency records of a report."""

    records: list[ConsistencyRecord]

    @property
    def consistent(self) -> bool:
        """True when every verdict agrees with the geometry (vacuous if none)."""
        return all(r.agrees for r in self.records)


class CriterionResult(BaseModel):
    """Outcome of one regression criterion."""

    criterion: str
    description: str
    passed: bool
    observed: str
    expected: str


class CorpusSummary(BaseModel):
    """Pass/fail table of a corpus regression run."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")
    seed: int
    criteria: list[CriterionResult]

    @property
    def passed(self) -> bool:
        """True when every criterion passed."""
        return all(c.passed for c in self.criteria)

    @property
    def failures(self) -> list[CriterionResult]:
        """Criteria that failed."""
        return [c for c in self.criteria if not c.passed]
