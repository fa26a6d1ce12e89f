"""Data models module."""

from conformal_rigidity.models.cn import Ball, CnBoundsRecord, CnDomainSpec, Polydisk, cn_adapter
from conformal_rigidity.models.domain import (
    Annulus,
    Disk,
    DomainSpec,
    MultiplyConnected,
    Polygon,
    Punctured,
    RoundedPolygon,
    SmoothJordan,
    domain_adapter,
    spec_key,
)
from conformal_rigidity.models.errors import (
    ArgumentError,
    ChainOrderingError,
    ConditioningError,
    ConfigurationError,
    ConformalRigidityError,
    ConvergenceError,
    CorpusError,
    DomainMembershipError,
    ErrorCode,
    ErrorDetail,
    GeometryError,
    NumericalError,
    UnsupportedConfigurationError,
)
from conformal_rigidity.models.results import (
    CHAIN_ORDER,
    BasisDescriptor,
    CapacityBracket,
    ChainEntry,
    ChainGap,
    ChainReport,
    Conclusion,
    ConsistencyRecord,
    CorpusSummary,
    CriterionResult,
    DeltaCapacityCheck,
    EqualityVerdict,
    GreenModel,
    GreenReport,
    HigherOrderBounds,
    KernelKind,
    KernelResult,
    ProbeReport,
    StabilityPoint,
    SublevelRecord,
    SublevelSweep,
    TheoremId,
)

__all__ = [
    # Domains
    "Annulus",
    "Disk",
    "DomainSpec",
    "MultiplyConnected",
    "Polygon",
    "Punctured",
    "RoundedPolygon",
    "SmoothJordan",
    "domain_adapter",
    "spec_key",
    "Ball",
    "CnDomainSpec",
    "Polydisk",
    "cn_adapter",
    # Results
    "CHAIN_ORDER",
    "BasisDescriptor",
    "CapacityBracket",
    "ChainEntry",
    "ChainGap",
    "ChainReport",
    "CnBoundsRecord",
    "Conclusion",
    "ConsistencyRecord",
    "CorpusSummary",
    "CriterionResult",
    "DeltaCapacityCheck",
    "EqualityVerdict",
    "GreenModel",
    "GreenReport",
    "HigherOrderBounds",
    "KernelKind",
    "KernelResult",
    "ProbeReport",
    "StabilityPoint",
    "SublevelRecord",
    "SublevelSweep",
    "TheoremId",
    # Errors
    "ArgumentError",
    "ChainOrderingError",
    "ConditioningError",
    "ConfigurationError",
    "ConformalRigidityError",
    "ConvergenceError",
    "CorpusError",
    "DomainMembershipError",
    "ErrorCode",
    "ErrorDetail",
    "GeometryError",
    "NumericalError",
    "UnsupportedConfigurationError",
]
