"""Numerical view of a planar domain.

``PlanarDomain`` turns a validated ``DomainSpec`` into boundary components
(outer curve plus reversed holes), checks the geometric invariants that
pydantic cannot express (simple curves, nested and disjoint holes, interior
punctures) and offers the primitive queries every solver needs.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from conformal_rigidity.config.settings import QuadratureConfig
from conformal_rigidity.geometry.curves import (
    CircleCurve,
    Corner,
    Curve,
    crossing_pairs,
    curve_from_spec,
    rounded_polygon_curve,
)
from conformal_rigidity.geometry.quadrature import ComplexArray, QuadratureRule
from conformal_rigidity.models.domain import (
    Annulus,
    Disk,
    DomainSpec,
    MultiplyConnected,
    Polygon,
    RoundedPolygon,
    SmoothJordan,
    base_of,
    punctures_of,
)
from conformal_rigidity.models.errors import (
    ConfigurationError,
    DomainMembershipError,
    GeometryError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryComponent:
    """One boundary curve and whether it bounds a hole."""

    curve: Curve
    is_hole: bool


class PlanarDomain:
    """Bounded planar domain with finitely many holes and punctures.

    Attributes:
        spec: The originating specification.
        outer: Outer boundary curve.
        holes: Hole curves, each positively oriented as a curve.
        punctures: Removed points (ignored by all measures).
    """

    def __init__(
        self,
        spec: DomainSpec,
        config: QuadratureConfig | None = None,
        validate: bool = True,
    ) -> None:
        """Build the boundary components of a spec.

        Args:
            spec: Domain specification.
            config: Quadrature settings (defaults when omitted).
            validate: Run the simplicity and nesting checks.

        Raises:
            GeometryError: If the geometry violates a domain invariant.
        """
        self.spec = spec
        self.config = config or QuadratureConfig()
        base = base_of(spec)
        self.punctures: tuple[complex, ...] = punctures_of(spec)
        if isinstance(base, Annulus):
            self.outer: Curve = CircleCurve(base.center, base.r_outer)
            self.holes: list[Curve] = [CircleCurve(base.center, base.r_inner)]
        elif isinstance(base, MultiplyConnected):
            self.outer = curve_from_spec(base.outer)
            self.holes = [curve_from_spec(h) for h in base.holes]
        elif isinstance(base, RoundedPolygon):
            self.outer = rounded_polygon_curve(base.vertices, base.radius)
            self.holes = []
        elif isinstance(base, Disk | Polygon | SmoothJordan):
            self.outer = curve_from_spec(base)
            self.holes = []
        else:  # pragma: no cover - exhaustive over the union
            raise GeometryError(f"unsupported domain: {type(base).__name__}")
        if validate:
            self._validate()
        logger.debug(
            "Built planar domain",
            extra={"kind": spec.kind, "holes": len(self.holes), "punctures": len(self.punctures)},
        )

    @property
    def components(self) -> list[BoundaryComponent]:
        """Outer component first, then holes in spec order."""
        return [BoundaryComponent(self.outer, False)] + [
            BoundaryComponent(h, True) for h in self.holes
        ]

    def _validate(self) -> None:
        samples = self.config.simplicity_samples
        rings = [c.polyline(samples) for c in [self.outer, *self.holes]]
        for index, ring in enumerate(rings):
            if crossing_pairs(ring).size:
                raise GeometryError("boundary curve is not simple", {"component": index})
        outer_ring = rings[0]
        for index, (hole, ring) in enumerate(zip(self.holes, rings[1:], strict=True), start=1):
            if not np.all(self.outer.contains(ring, self.config.polyline_resolution)):
                raise GeometryError("hole leaves the outer curve", {"component": index})
            if crossing_pairs(outer_ring, ring).size:
                raise GeometryError("hole touches the outer curve", {"component": index})
            for other, other_ring in enumerate(rings[index + 1 :], start=index + 1):
                if (
                    crossing_pairs(ring, other_ring).size
                    or np.any(hole.contains(other_ring, self.config.polyline_resolution))
                    or np.any(
                        self.holes[other - 1].contains(ring, self.config.polyline_resolution)
                    )
                ):
                    raise GeometryError("holes overlap", {"components": [index, other]})
        for puncture in self.punctures:
            if not bool(self._contains_base(np.array([puncture]))[0]):
                raise GeometryError(
                    "puncture outside the base domain",
                    {"puncture": [puncture.real, puncture.imag]},
                )

    @cached_property
    def area(self) -> float:
        """v(Omega); punctures do not contribute."""
        return self.outer.area - sum(h.area for h in self.holes)

    @cached_property
    def perimeter(self) -> float:
        """Total arclength of all boundary components."""
        return self.outer.length + sum(h.length for h in self.holes)

    @cached_property
    def centroid(self) -> complex:
        """Area centroid, from (1/2i) of the contour integral of |z|^2 dz."""
        rule = self.quadrature(max(self.config.nodes_per_component, 256))
        moment = rule.contour_integral(np.abs(rule.nodes) ** 2) / 2j
        return complex(moment / self.area)

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        """Bounding box of the outer curve."""
        return self.outer.bbox(self.config.polyline_resolution)

    @cached_property
    def diameter(self) -> float:
        """Diameter of the outer boundary."""
        ring = self.outer.polyline(512)
        return float(np.abs(ring[:, None] - ring[None, :]).max())

    def quadrature(self, n_nodes: int | None = None) -> QuadratureRule:
        """Boundary quadrature rule in the positive orientation.

        Args:
            n_nodes: Base node count per component (configured default when omitted).

        Returns:
            QuadratureRule: Nodes of the outer curve followed by each hole.

        Raises:
            ConfigurationError: If fewer than 8 nodes per component are requested.
        """
        n = self.config.nodes_per_component if n_nodes is None else n_nodes
        if n < 8:
            raise ConfigurationError("at least 8 nodes per boundary component", {"n_nodes": n})
        cfg = self.config
        parts = []
        for component in self.components:
            nodes, weights, tangents = component.curve.quadrature(
                n, cfg.gauss_order, cfg.corner_grading_ratio, cfg.corner_grading_levels
            )
            if component.is_hole:
                tangents = -tangents
            parts.append((nodes, weights, tangents))
        return QuadratureRule.concatenate(parts)

    def _contains_base(self, z: ComplexArray) -> NDArray[np.bool_]:
        resolution = self.config.polyline_resolution
        inside = self.outer.contains(z, resolution)
        for hole in self.holes:
            inside &= ~hole.contains(z, resolution)
        return inside

    def contains(self, z: ComplexArray | complex) -> NDArray[np.bool_]:
        """Membership of points in Omega; punctures excluded only on exact match."""
        points = np.atleast_1d(np.asarray(z, dtype=complex))
        inside = self._contains_base(points)
        for puncture in self.punctures:
            inside &= points != puncture
        return inside

    def dist_boundary(self, z: complex) -> float:
        """Distance from an interior point to the boundary, ignoring punctures.

        Raises:
            DomainMembershipError: If z is not in Omega.
        """
        self.require_interior(z)
        point = np.array([z], dtype=complex)
        return float(min(float(c.curve.distance(point)[0]) for c in self.components))

    def require_interior(self, z: complex, what: str = "point") -> None:
        """Raise unless z lies in the base domain.

        Raises:
            DomainMembershipError: If z is outside or on the boundary.
        """
        if not bool(self._contains_base(np.array([z], dtype=complex))[0]):
            raise DomainMembershipError(f"{what} lies outside the domain", point=complex(z))

    def require_away_from_punctures(self, z: complex, what: str = "pole") -> None:
        """Raise if z coincides with a puncture."""
        for puncture in self.punctures:
            if abs(z - puncture) <= 1e-14 * max(1.0, abs(puncture)):
                raise DomainMembershipError(f"{what} coincides with a puncture", point=complex(z))

    def corners(self) -> list[Corner]:
        """Corners of every component, with the outward direction relative to Omega."""
        result = []
        for component in self.components:
            for corner in component.curve.corners():
                outward = -corner.outward if component.is_hole else corner.outward
                result.append(corner._replace(outward=outward))
        return result

    def hole_sources(self) -> list[tuple[complex, float]]:
        """Source point and scale for each hole.

        The source is the hole centroid and the scale the distance from it to the
        hole boundary, so that |scale / (z - source)| <= 1 on the closure of Omega.
        """
        sources = []
        for hole in self.holes:
            if isinstance(hole, CircleCurve):
                sources.append((hole.center, hole.radius))
                continue
            nodes, weights, tangents = hole.quadrature(
                max(self.config.nodes_per_component, 256),
                self.config.gauss_order,
                self.config.corner_grading_ratio,
                0,
            )
            moment = np.sum(np.abs(nodes) ** 2 * tangents * weights) / 2j
            source = complex(moment / hole.area)
            if not bool(hole.contains(np.array([source]), self.config.polyline_resolution)[0]):
                raise GeometryError("hole centroid lies outside the hole")
            sources.append((source, float(hole.distance(np.array([source]))[0])))
        return sources

    def interior_samples(
        self, count: int, rng: np.random.Generator, margin: float = 0.0
    ) -> ComplexArray:
        """Uniform random interior points at distance > margin from the boundary.

        Args:
            count: Number of points.
            rng: Random generator (seeded by the caller).
            margin: Minimum boundary distance.

        Returns:
            Array of ``count`` interior points.
        """
        xmin, xmax, ymin, ymax = self.bbox
        accepted: list[ComplexArray] = []
        total = 0
        for _ in range(200):
            batch = rng.uniform(xmin, xmax, 4 * count) + 1j * rng.uniform(ymin, ymax, 4 * count)
            keep = batch[self.contains(batch)]
            if margin > 0.0 and keep.size:
                distance = np.min([c.curve.distance(keep) for c in self.components], axis=0)
                keep = keep[distance > margin]
            accepted.append(keep)
            total += keep.size
            if total >= count:
                break
        points = np.concatenate(accepted)[:count]
        if points.size < count:
            raise GeometryError("could not sample interior points", {"requested": count})
        return points

    def max_distance_from(self, z0: complex) -> float:
        """Largest distance from z0 to the outer boundary."""
        ring = self.outer.polyline(self.config.polyline_resolution)
        return float(np.abs(ring - z0).max())

