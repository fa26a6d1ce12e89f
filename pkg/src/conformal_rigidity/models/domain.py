"""Planar domain specifications.

A domain is described by a frozen, hashable pydantic model so that it can be
used as a cache key, serialized into reports and compared for equality. The
numerical geometry (boundary curves, quadrature, membership) lives in
``conformal_rigidity.geometry`` and is derived from these specifications.
"""

from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    TypeAdapter,
    field_validator,
    model_validator,
)


def _to_complex(value: Any) -> Any:
    """Accept ``[re, im]`` pairs, numbers and complex literals."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex numbers are written as [re, im]")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    return value


def _from_complex(value: complex) -> list[float]:
    return [value.real, value.imag]


Complex = Annotated[
    complex,
    BeforeValidator(_to_complex),
    PlainSerializer(_from_complex, return_type=list[float]),
]
"""Complex number serialized as ``[re, im]``."""

FourierTerm = tuple[int, Complex]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class Disk(_Frozen):
    """Open disk D(center, radius); also used as a circular boundary curve."""

    kind: Literal["disk"] = "disk"
    center: Complex = Field(default=0j, description="Disk center")
    radius: float = Field(..., gt=0.0, description="Disk radius")


class Annulus(_Frozen):
    """Concentric annulus r_inner < |z - center| < r_outer."""

    kind: Literal["annulus"] = "annulus"
    center: Complex = Field(default=0j, description="Common center of both circles")
    r_inner: float = Field(..., gt=0.0, description="Inner radius")
    r_outer: float = Field(..., gt=0.0, description="Outer radius")

    @model_validator(mode="after")
    def validate_radii(self) -> "Annulus":
        """Validate that the inner radius is strictly smaller."""
        if not self.r_inner < self.r_outer:
            raise ValueError("r_inner must be smaller than r_outer")
        return self


def _counterclockwise(v: tuple[complex, ...]) -> tuple[complex, ...]:
    signed = 0.0
    for a, b in zip(v, (*v[1:], v[0]), strict=True):
        signed += a.real * b.imag - b.real * a.imag
    if signed <= 0.0:
        raise ValueError("polygon vertices must be listed counterclockwise")
    return v


class Polygon(_Frozen):
    """Simple polygon with counterclockwise vertices."""

    kind: Literal["polygon"] = "polygon"
    vertices: tuple[Complex, ...] = Field(..., min_length=3, description="Vertices, CCW")

    @field_validator("vertices")
    @classmethod
    def validate_orientation(cls, v: tuple[complex, ...]) -> tuple[complex, ...]:
        """Reject clockwise or degenerate vertex lists."""
        return _counterclockwise(v)


class RoundedPolygon(_Frozen):
    """Polygon whose corners are replaced by inscribed circular arcs of one radius."""

    kind: Literal["rounded_polygon"] = "rounded_polygon"
    vertices: tuple[Complex, ...] = Field(..., min_length=3, description="Polygon vertices, CCW")
    radius: float = Field(..., gt=0.0, description="Rounding radius")

    @field_validator("vertices")
    @classmethod
    def validate_orientation(cls, v: tuple[complex, ...]) -> tuple[complex, ...]:
        """Reject clockwise or degenerate vertex lists."""
        return _counterclockwise(v)


class SmoothJordan(_Frozen):
    """Curve gamma(theta) = center + sum_k c_k e^{ik theta}, traversed counterclockwise."""

    kind: Literal["smooth_jordan"] = "smooth_jordan"
    center: Complex = Field(default=0j, description="Translation added to the series")
    coefficients: tuple[FourierTerm, ...] = Field(
        ..., min_length=1, description="Pairs (k, c_k) of the trigonometric series"
    )

    @field_validator("coefficients")
    @classmethod
    def validate_coefficients(
        cls, v: tuple[tuple[int, complex], ...]
    ) -> tuple[tuple[int, complex], ...]:
        """Reject repeated wavenumbers and negatively oriented curves."""
        wavenumbers = [k for k, _ in v]
        if len(set(wavenumbers)) != len(wavenumbers):
            raise ValueError("wavenumbers must be distinct")
        if sum(k * abs(c) ** 2 for k, c in v) <= 0.0:
            raise ValueError("curve must be positively oriented (enclose positive area)")
        return v


BoundaryCurve = Annotated[Disk | Polygon | SmoothJordan, Field(discriminator="kind")]
"""A closed Jordan curve usable as an outer boundary or as a hole."""


class MultiplyConnected(_Frozen):
    """Region inside ``outer`` and outside every hole."""

    kind: Literal["multiply_connected"] = "multiply_connected"
    outer: BoundaryCurve
    holes: tuple[BoundaryCurve, ...] = Field(..., min_length=1)


BaseDomain = Annotated[
    Disk | Annulus | Polygon | RoundedPolygon | SmoothJordan | MultiplyConnected,
    Field(discriminator="kind"),
]


class Punctured(_Frozen):
    """Base domain less finitely many points (a polar set at finite resolution)."""

    kind: Literal["punctured"] = "punctured"
    base: BaseDomain
    punctures: tuple[Complex, ...] = Field(..., min_length=1)


DomainSpec = Annotated[
    Disk | Annulus | Polygon | RoundedPolygon | SmoothJordan | MultiplyConnected | Punctured,
    Field(discriminator="kind"),
]
"""Closed set of supported planar domain variants."""

domain_adapter: TypeAdapter[DomainSpec] = TypeAdapter(DomainSpec)


def base_of(
    spec: DomainSpec,
) -> Disk | Annulus | Polygon | RoundedPolygon | SmoothJordan | MultiplyConnected:
    """Strip punctures; every measure and solver works on the base domain."""
    return spec.base if isinstance(spec, Punctured) else spec


def punctures_of(spec: DomainSpec) -> tuple[complex, ...]:
    """Return the puncture list (empty for unpunctured specs)."""
    return spec.punctures if isinstance(spec, Punctured) else ()


def hole_count(spec: DomainSpec) -> int:
    """Number of bounded complementary components of positive area."""
    base = base_of(spec)
    if isinstance(base, Annulus):
        return 1
    if isinstance(base, MultiplyConnected):
        return len(base.holes)
    return 0


def spec_key(spec: DomainSpec) -> str:
    """Stable string key of a spec (used for caching and report labels)."""
    return domain_adapter.dump_json(spec).decode()
