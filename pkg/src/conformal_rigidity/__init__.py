"""Conformal rigidity toolkit.

Green's functions, logarithmic and analytic capacity, Bergman and Szego
kernels of planar domains, the inequality chains between them and the
rigidity statements their equality cases imply.
"""

__version__ = "0.1.0"

from conformal_rigidity.config.settings import RunConfig, get_run_config
from conformal_rigidity.models.domain import (
    Annulus,
    Disk,
    DomainSpec,
    MultiplyConnected,
    Polygon,
    Punctured,
    SmoothJordan,
)
from conformal_rigidity.models.errors import ConformalRigidityError, ErrorCode
from conformal_rigidity.models.results import ChainReport, GreenModel, KernelResult

__all__ = [
    "__version__",
    # Config
    "RunConfig",
    "get_run_config",
    # Domains
    "Annulus",
    "Disk",
    "DomainSpec",
    "MultiplyConnected",
    "Polygon",
    "Punctured",
    "SmoothJordan",
    # Results
    "ChainReport",
    "GreenModel",
    "KernelResult",
    # Errors
    "ConformalRigidityError",
    "ErrorCode",
]
