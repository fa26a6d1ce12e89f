"""Custom exceptions and error codes for the conformal rigidity toolkit.

This module defines a hierarchy of exceptions for the failure families of the
numerical pipeline (invalid geometry, points outside the domain, solver
non-convergence, ill-conditioning, chain ordering violations) together with
error codes for structured reporting on the command line.
"""

from enum import StrEnum
from typing import Any


class ErrorCode(StrEnum):
    """Standardized error codes for the application."""

    # Input errors
    GEOMETRY_INVALID = "geometry_invalid"
    POINT_OUTSIDE_DOMAIN = "point_outside_domain"
    CONFIGURATION_INVALID = "configuration_invalid"
    ARGUMENT_INVALID = "argument_invalid"
    UNSUPPORTED = "unsupported_configuration"
    CORPUS_MISSING = "corpus_missing"

    # Numerical errors
    SOLVER_NOT_CONVERGED = "solver_not_converged"
    ILL_CONDITIONED = "ill_conditioned"
    NUMERICAL_FAILURE = "numerical_failure"
    CHAIN_ORDER_VIOLATION = "chain_order_violation"

    INTERNAL_ERROR = "internal_error"


class ErrorDetail:
    """Structured error detail information."""

    def __init__(
        self,
        code: ErrorCode,
        message: str,
        details: dict[str, Any] | None = None,
    ) -> None:
        """Initialize error detail.

        Args:
            code: Error code identifier.
            message: Human-readable error message.
            details: Optional additional context.
        """
        self.code = code
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary representation.

        Returns:
            dict: Dictionary containing error information.
        """
        result: dict[str, Any] = {
            "code": self.code,
            "message": self.message,
        }
        if self.details:
            result["details"] = self.details
        return result

    def __repr__(self) -> str:
        return f"ErrorDetail(code={self.code}, message={self.message!r})"


class ConformalRigidityError(Exception):
    """Base exception for all toolkit errors.

    All custom exceptions in this package inherit from this class, so callers
    can catch one type and still inspect a machine-readable code.
    """

    def __init__(
        self,
        message: str,
        code: ErrorCode = ErrorCode.INTERNAL_ERROR,
        details: dict[str, Any] | None = None,
    ) -> None:
        """Initialize base error.

        Args:
            message: Human-readable error message.
            code: Error code identifier.
            details: Optional additional context.
        """
        super().__init__(message)
        self.message = message
        self.code = code
        self.details = details or {}

    def to_error_detail(self) -> ErrorDetail:
        """Convert exception to ErrorDetail.

        Returns:
            ErrorDetail: Structured error detail.
        """
        return ErrorDetail(code=self.code, message=self.message, details=self.details)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(code={self.code}, message={self.message!r})"


class GeometryError(ConformalRigidityError):
    """Exception raised for invalid or unresolvable geometry.

    This includes:
    - Non-positive radii or inverted annulus radii
    - Self-intersecting or clockwise boundary curves
    - Holes that leave the outer curve or touch each other
    - Level curves the contour extractor cannot close
    """

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        """Initialize geometry error.

        Args:
            message: Error message describing the geometric defect.
            details: Optional context (component index, offending sample).
        """
        super().__init__(message=message, code=ErrorCode.GEOMETRY_INVALID, details=details)


class DomainMembershipError(ConformalRigidityError):
    """Exception raised when a point is required to lie inside the domain but does not."""

    def __init__(self, message: str, point: complex, details: dict[str, Any] | None = None) -> None:
        """Initialize domain membership error.

        Args:
            message: Error message.
            point: The offending point.
            details: Optional additional context.
        """
        merged = {"point": [point.real, point.imag], **(details or {})}
        super().__init__(message=message, code=ErrorCode.POINT_OUTSIDE_DOMAIN, details=merged)
        self.point = point


class ConfigurationError(ConformalRigidityError):
    """Exception raised for parameters that make a computation ill-posed."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        """Initialize configuration error.

        Args:
            message: Error message describing the bad parameter.
            details: Optional parameter values.
        """
        super().__init__(message=message, code=ErrorCode.CONFIGURATION_INVALID, details=details)


class ArgumentError(ConformalRigidityError):
    """Exception raised for out-of-range operation arguments (e.g. a level t >= 0)."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message=message, code=ErrorCode.ARGUMENT_INVALID, details=details)


class UnsupportedConfigurationError(ConformalRigidityError):
    """Exception raised when no closed form or method exists for the request."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message=message, code=ErrorCode.UNSUPPORTED, details=details)


class ConvergenceError(ConformalRigidityError):
    """Exception raised when a solver misses its declared tolerance."""

    def __init__(
        self,
        message: str,
        residual: float,
        tolerance: float,
        details: dict[str, Any] | None = None,
    ) -> None:
        """Initialize convergence error.

        Args:
            message: Error message.
            residual: Achieved residual.
            tolerance: Declared tolerance that was missed.
            details: Optional solver context (basis size, nodes).
        """
        merged = {"residual": residual, "tolerance": tolerance, **(details or {})}
        super().__init__(message=message, code=ErrorCode.SOLVER_NOT_CONVERGED, details=merged)
        self.residual = residual
        self.tolerance = tolerance


class ConditioningError(ConformalRigidityError):
    """Exception raised when a Gram matrix is numerically singular beyond the cutoff."""

    def __init__(
        self, message: str, condition: float, details: dict[str, Any] | None = None
    ) -> None:
        """Initialize conditioning error.

        Args:
            message: Error message.
            condition: Condition estimate of the retained spectrum.
            details: Optional context.
        """
        merged = {"condition": condition, **(details or {})}
        super().__init__(message=message, code=ErrorCode.ILL_CONDITIONED, details=merged)
        self.condition = condition


class NumericalError(ConformalRigidityError):
    """Exception raised for degenerate fits and failed integrations."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message=message, code=ErrorCode.NUMERICAL_FAILURE, details=details)


class ChainOrderingError(ConformalRigidityError):
    """Exception raised when computed chain entries violate a proven inequality.

    The theorems make such violations impossible, so the error measures solver
    inaccuracy rather than a property of the domain.
    """

    def __init__(self, message: str, violations: list[str]) -> None:
        """Initialize chain ordering error.

        Args:
            message: Error message.
            violations: Human-readable descriptions of the violated pairs.
        """
        super().__init__(
            message=message,
            code=ErrorCode.CHAIN_ORDER_VIOLATION,
            details={"violations": violations},
        )
        self.violations = violations


class CorpusError(ConformalRigidityError):
    """Exception raised when the regression corpus is missing or incomplete."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message=message, code=ErrorCode.CORPUS_MISSING, details=details)
