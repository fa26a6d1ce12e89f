"""Closed-form domains of C^n and their bound records."""

from typing import Annotated, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from conformal_rigidity.models.domain import Complex


class Ball(BaseModel):
    """Euclidean ball B^n(center, radius)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["ball"] = "ball"
    n: int = Field(..., ge=1, le=64, description="Complex dimension")
    center: tuple[Complex, ...] | None = Field(default=None, description="Defaults to the origin")
    radius: float = Field(..., gt=0.0)

    @model_validator(mode="after")
    def validate_center(self) -> Self:
        """Validate the center dimension."""
        if self.center is not None and len(self.center) != self.n:
            raise ValueError("center must have n coordinates")
        return self


class Polydisk(BaseModel):
    """Product of disks D(center_i, r_i)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["polydisk"] = "polydisk"
    radii: tuple[float, ...] = Field(..., min_length=1, max_length=64)
    center: tuple[Complex, ...] | None = None

    @property
    def n(self) -> int:
        """Complex dimension."""
        return len(self.radii)

    @model_validator(mode="after")
    def validate_radii(self) -> Self:
        """Validate positivity and the center dimension."""
        if min(self.radii) <= 0.0:
            raise ValueError("polydisk radii must be positive")
        if self.center is not None and len(self.center) != len(self.radii):
            raise ValueError("center must have one coordinate per radius")
        return self


CnDomainSpec = Annotated[Ball | Polydisk, Field(discriminator="kind")]

cn_adapter: TypeAdapter[CnDomainSpec] = TypeAdapter(CnDomainSpec)


class CnBoundsRecord(BaseModel):
    """Bounds K <= n!/(pi^n delta^2n) and v(I^A) >= (pi^n/n!) delta^2n at the center."""

    domain: CnDomainSpec
    n: int
    kernel: float = Field(..., description="Bergman kernel at the center")
    delta: float = Field(..., description="Distance from the center to the boundary")
    bound_b: float = Field(..., description="n! / (pi^n delta^2n)")
    azukawa_volume: float
    bound_a: float = Field(..., description="(pi^n / n!) delta^2n")
    kernel_equality: bool
    volume_equality: bool

    @property
    def bounds_hold(self) -> bool:
        """Both inequalities hold (closed forms, tight relative slack)."""
        return (
            self.kernel <= self.bound_b * (1.0 + 1e-12)
            and self.azukawa_volume >= self.bound_a * (1.0 - 1e-12)
        )
