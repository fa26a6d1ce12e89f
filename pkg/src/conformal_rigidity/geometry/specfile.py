"""Domain-spec file parser.

A domain file is a JSON object::

    {"type": "annulus", "name": "annulus-quarter", "center": [0, 0],
     "r_inner": 0.25, "r_outer": 1.0}

``type`` is one of ``disk``, ``annulus``, ``polygon`` or ``smooth_jordan``.
``holes`` (curve objects of type disk, polygon or smooth_jordan) turn the
outer curve into a multiply connected domain; ``punctures`` wrap the result
in a punctured domain. Unknown fields are rejected.
"""

import json
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from conformal_rigidity.models.domain import (
    Annulus,
    Complex,
    Disk,
    DomainSpec,
    MultiplyConnected,
    Polygon,
    Punctured,
    SmoothJordan,
)
from conformal_rigidity.models.errors import GeometryError


class CurveFile(BaseModel):
    """Curve object of a domain file."""

    model_config = ConfigDict(extra="forbid")

    type: Literal["disk", "polygon", "smooth_jordan"]
    center: Complex = 0j
    radius: float | None = None
    vertices: list[Complex] | None = None
    fourier: list[tuple[int, Complex]] | None = None

    def to_curve(self) -> Disk | Polygon | SmoothJordan:
        """Convert to the boundary-curve model."""
        if self.type == "disk":
            if self.radius is None:
                raise ValueError("disk requires 'radius'")
            return Disk(center=self.center, radius=self.radius)
        if self.type == "polygon":
            if self.vertices is None:
                raise ValueError("polygon requires 'vertices'")
            return Polygon(vertices=tuple(self.vertices))
        if self.fourier is None:
            raise ValueError("smooth_jordan requires 'fourier'")
        return SmoothJordan(center=self.center, coefficients=tuple(self.fourier))


class DomainFile(CurveFile):
    """Top-level domain file object."""

    type: Literal["disk", "annulus", "polygon", "smooth_jordan"]  # type: ignore[assignment]
    name: str | None = Field(default=None, description="Label used in reports")
    r_inner: float | None = None
    r_outer: float | None = None
    holes: list[CurveFile] = Field(default_factory=list)
    punctures: list[Complex] = Field(default_factory=list)

    def to_spec(self) -> DomainSpec:
        """Assemble the domain specification."""
        base: Disk | Annulus | Polygon | SmoothJordan | MultiplyConnected
        if self.type == "annulus":
            if self.r_inner is None or self.r_outer is None:
                raise ValueError("annulus requires 'r_inner' and 'r_outer'")
            if self.holes:
                raise ValueError("annulus files cannot declare extra holes")
            base = Annulus(center=self.center, r_inner=self.r_inner, r_outer=self.r_outer)
        else:
            outer = CurveFile.model_validate(
                self.model_dump(include={"type", "center", "radius", "vertices", "fourier"})
            ).to_curve()
            if self.holes:
                base = MultiplyConnected(
                    outer=outer, holes=tuple(h.to_curve() for h in self.holes)
                )
            else:
                base = outer
        if self.punctures:
            return Punctured(base=base, punctures=tuple(self.punctures))
        return base


def parse_domain(data: dict[str, Any]) -> tuple[DomainSpec, str | None]:
    """Parse a decoded domain-file object.

    Args:
        data: Decoded JSON object.

    Returns:
        tuple: The domain spec and the optional ``name``.

    Raises:
        GeometryError: If the object is malformed or the geometry is invalid.
    """
    try:
        document = DomainFile.model_validate(data)
        return document.to_spec(), document.name
    except (ValidationError, ValueError) as e:
        raise GeometryError("invalid domain file", {"reason": str(e)}) from e


def load_domain(path: Path) -> tuple[DomainSpec, str | None]:
    """Read and parse a domain file.

    Raises:
        FileNotFoundError: If the file does not exist.
        GeometryError: If the content is not a valid domain.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise GeometryError("domain file is not valid JSON", {"path": str(path)}) from e
    if not isinstance(data, dict):
        raise GeometryError("domain file must hold a JSON object", {"path": str(path)})
    return parse_domain(data)
