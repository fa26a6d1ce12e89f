"""Closed boundary curves.

Every curve is positively oriented (counterclockwise) as constructed; the
planar domain reverses hole components when it assembles the boundary.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from matplotlib.path import Path
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar

from conformal_rigidity.geometry.quadrature import (
    ComplexArray,
    FloatArray,
    graded_breakpoints,
    panel_rule,
    trapezoid_parameters,
)
from conformal_rigidity.models.domain import BoundaryCurve, Disk, Polygon, SmoothJordan
from conformal_rigidity.models.errors import GeometryError

CurveRule = tuple[ComplexArray, FloatArray, ComplexArray]


class Corner(NamedTuple):
    """Non-smooth boundary point of a panel curve.

    Attributes:
        vertex: Corner location.
        outward: Unit direction bisecting the exterior angle.
        scale: Half the shorter adjacent edge length.
        turning: Signed turning angle of the tangent (positive for convex).
    """

    vertex: complex
    outward: complex
    scale: float
    turning: float


class Curve(ABC):
    """Closed, positively oriented Jordan curve."""

    @abstractmethod
    def quadrature(self, n_nodes: int, order: int, ratio: float, levels: int) -> CurveRule:
        """Nodes, arclength weights and unit tangents."""

    @abstractmethod
    def polyline(self, resolution: int) -> ComplexArray:
        """Open list of points tracing the curve counterclockwise."""

    @abstractmethod
    def distance(self, z: ComplexArray) -> FloatArray:
        """Euclidean distance from each point to the curve."""

    @property
    @abstractmethod
    def length(self) -> float:
        """Arclength."""

    @property
    @abstractmethod
    def area(self) -> float:
        """Enclosed area."""

    def corners(self) -> list[Corner]:
        """Corners of the curve (empty for smooth curves)."""
        return []

    def contains(self, z: ComplexArray, resolution: int) -> NDArray[np.bool_]:
        """Points strictly enclosed by the curve."""
        ring = self.polyline(resolution)
        path = Path(np.column_stack([ring.real, ring.imag]))
        return np.asarray(path.contains_points(np.column_stack([z.real, z.imag])), dtype=bool)

    def bbox(self, resolution: int = 1024) -> tuple[float, float, float, float]:
        """Axis-aligned bounding box (xmin, xmax, ymin, ymax)."""
        ring = self.polyline(resolution)
        return (
            float(ring.real.min()),
            float(ring.real.max()),
            float(ring.imag.min()),
            float(ring.imag.max()),
        )


class CircleCurve(Curve):
    """Circle |z - center| = radius."""

    def __init__(self, center: complex, radius: float) -> None:
        self.center = complex(center)
        self.radius = float(radius)

    def quadrature(self, n_nodes: int, order: int, ratio: float, levels: int) -> CurveRule:
        theta = trapezoid_parameters(n_nodes)
        unit = np.exp(1j * theta)
        weights = np.full(n_nodes, 2.0 * np.pi * self.radius / n_nodes)
        return self.center + self.radius * unit, weights, 1j * unit

    def polyline(self, resolution: int) -> ComplexArray:
        return self.center + self.radius * np.exp(1j * trapezoid_parameters(resolution))

    def distance(self, z: ComplexArray) -> FloatArray:
        return np.abs(np.abs(np.asarray(z) - self.center) - self.radius)

    def contains(self, z: ComplexArray, resolution: int) -> NDArray[np.bool_]:
        return np.abs(np.asarray(z) - self.center) < self.radius

    def bbox(self, resolution: int = 1024) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return c.real - r, c.real + r, c.imag - r, c.imag + r

    @property
    def length(self) -> float:
        return 2.0 * math.pi * self.radius

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


class FourierCurve(Curve):
    """Curve gamma(theta) = center + sum_k c_k exp(i k theta)."""

    def __init__(self, center: complex, terms: tuple[tuple[int, complex], ...]) -> None:
        self.center = complex(center)
        self.wavenumbers = np.array([k for k, _ in terms], dtype=float)
        self.coefficients = np.array([c for _, c in terms], dtype=complex)

    def point(self, theta: FloatArray) -> ComplexArray:
        phase = np.exp(1j * np.multiply.outer(np.asarray(theta, dtype=float), self.wavenumbers))
        return self.center + phase @ self.coefficients

    def derivative(self, theta: FloatArray) -> ComplexArray:
        phase = np.exp(1j * np.multiply.outer(np.asarray(theta, dtype=float), self.wavenumbers))
        return phase @ (1j * self.wavenumbers * self.coefficients)

    def quadrature(self, n_nodes: int, order: int, ratio: float, levels: int) -> CurveRule:
        theta = trapezoid_parameters(n_nodes)
        velocity = self.derivative(theta)
        speed = np.abs(velocity)
        if speed.min() <= 1e-12 * speed.max():
            raise GeometryError("parameterization has a vanishing derivative")
        return self.point(theta), speed * (2.0 * np.pi / n_nodes), velocity / speed

    def polyline(self, resolution: int) -> ComplexArray:
        return self.point(trapezoid_parameters(resolution))

    def distance(self, z: ComplexArray) -> FloatArray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        samples = 2048
        theta = trapezoid_parameters(samples)
        ring = self.point(theta)
        step = 2.0 * np.pi / samples
        result = np.empty(z.size)
        for index, w in enumerate(z):
            start = theta[int(np.argmin(np.abs(ring - w)))]
            refined = minimize_scalar(
                lambda s, w=w: float(np.abs(self.point(np.array([s]))[0] - w)),
                bounds=(start - step, start + step),
                method="bounded",
                options={"xatol": 1e-13},
            )
            result[index] = min(float(refined.fun), float(np.abs(ring - w).min()))
        return result

    @property
    def length(self) -> float:
        _, weights, _ = self.quadrature(4096, 0, 0.0, 0)
        return float(weights.sum())

    @property
    def area(self) -> float:
        return float(np.pi * np.sum(self.wavenumbers * np.abs(self.coefficients) ** 2))


@dataclass(frozen=True)
class Segment:
    """Straight panel from ``start`` to ``end``."""

    start: complex
    end: complex

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def point(self, u: FloatArray) -> ComplexArray:
        return self.start + (self.end - self.start) * u

    def tangent(self, u: FloatArray) -> ComplexArray:
        return np.full(np.shape(u), (self.end - self.start) / self.length, dtype=complex)

    def distance(self, z: ComplexArray) -> FloatArray:
        d = self.end - self.start
        u = np.clip(np.real((z - self.start) * np.conj(d)) / abs(d) ** 2, 0.0, 1.0)
        return np.abs(z - (self.start + u * d))


@dataclass(frozen=True)
class Arc:
    """Circular arc center + radius * exp(i (theta0 + sweep * u)), u in [0, 1]."""

    center: complex
    radius: float
    theta0: float
    sweep: float

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    def point(self, u: FloatArray) -> ComplexArray:
        return self.center + self.radius * np.exp(1j * (self.theta0 + self.sweep * u))

    def tangent(self, u: FloatArray) -> ComplexArray:
        return 1j * np.sign(self.sweep) * np.exp(1j * (self.theta0 + self.sweep * u))

    def distance(self, z: ComplexArray) -> FloatArray:
        offset = np.sign(self.sweep) * (np.angle(z - self.center) - self.theta0)
        on_arc = np.mod(offset, 2.0 * np.pi) <= abs(self.sweep)
        radial = np.abs(np.abs(z - self.center) - self.radius)
        ends = np.minimum(
            np.abs(z - self.point(np.array(0.0))), np.abs(z - self.point(np.array(1.0)))
        )
        return np.where(on_arc, radial, ends)


Piece = Segment | Arc


class PanelCurve(Curve):
    """Closed chain of segments and arcs discretized by graded Gauss panels."""

    def __init__(self, pieces: list[Piece]) -> None:
        if not pieces:
            raise GeometryError("panel curve needs at least one piece")
        self.pieces = pieces

    def quadrature(self, n_nodes: int, order: int, ratio: float, levels: int) -> CurveRule:
        total = self.length
        target = max(n_nodes / order, 2.0 * len(self.pieces))
        nodes, weights, tangents = [], [], []
        for piece in self.pieces:
            panels = max(2, math.ceil(target * piece.length / total))
            u, w = panel_rule(graded_breakpoints(panels, ratio, levels), order)
            nodes.append(piece.point(u))
            weights.append(w * piece.length)
            tangents.append(piece.tangent(u))
        return np.concatenate(nodes), np.concatenate(weights), np.concatenate(tangents)

    def polyline(self, resolution: int) -> ComplexArray:
        total = self.length
        points = []
        for piece in self.pieces:
            if isinstance(piece, Segment):
                points.append(np.array([piece.start]))
            else:
                count = max(8, math.ceil(resolution * piece.length / total))
                points.append(piece.point(np.arange(count) / count))
        return np.concatenate(points)

    def distance(self, z: ComplexArray) -> FloatArray:
        z = np.asarray(z, dtype=complex)
        return np.min([piece.distance(z) for piece in self.pieces], axis=0)

    @property
    def length(self) -> float:
        return float(sum(piece.length for piece in self.pieces))

    @property
    def area(self) -> float:
        nodes, weights, tangents = self.quadrature(16 * len(self.pieces), 16, 0.5, 0)
        return float(0.5 * np.sum(np.imag(np.conj(nodes) * tangents) * weights))

    def corners(self) -> list[Corner]:
        result = []
        for index, piece in enumerate(self.pieces):
            previous = self.pieces[index - 1]
            incoming = complex(previous.tangent(np.array(1.0)))
            outgoing = complex(piece.tangent(np.array(0.0)))
            turning = float(np.angle(outgoing / incoming))
            if abs(turning) < 1e-9:
                continue
            inward = 1j * incoming + 1j * outgoing
            if abs(inward) < 1e-12:
                continue
            scale = 0.5 * min(previous.length, piece.length)
            vertex = complex(piece.point(np.array(0.0)))
            result.append(Corner(vertex, -inward / abs(inward), scale, turning))
        return result


def polygon_curve(vertices: tuple[complex, ...]) -> PanelCurve:
    """Panel curve through the vertices of a counterclockwise polygon."""
    closed = (*vertices, vertices[0])
    pieces: list[Piece] = [Segment(a, b) for a, b in zip(closed[:-1], closed[1:], strict=True)]
    if min(p.length for p in pieces) <= 0.0:
        raise GeometryError("polygon has repeated consecutive vertices")
    return PanelCurve(pieces)


def rounded_polygon_curve(vertices: tuple[complex, ...], radius: float) -> PanelCurve:
    """Replace every corner by the inscribed circular arc of the given radius.

    The arc is tangent to both adjacent edges, so the curve is C^1 and lies in
    the closed polygon.

    Args:
        vertices: Counterclockwise polygon vertices.
        radius: Rounding radius.

    Returns:
        PanelCurve: Alternating arcs and shortened edges.

    Raises:
        GeometryError: If an arc does not fit inside half of an adjacent edge.
    """
    if radius <= 0.0:
        raise GeometryError("rounding radius must be positive", {"radius": radius})
    n = len(vertices)
    edges = [vertices[(i + 1) % n] - vertices[i] for i in range(n)]
    lengths = [abs(e) for e in edges]
    arcs: list[tuple[complex, complex, Arc]] = []
    for i in range(n):
        d_in = edges[i - 1] / lengths[i - 1]
        d_out = edges[i] / lengths[i]
        turning = float(np.angle(d_out / d_in))
        tangent_length = radius * math.tan(abs(turning) / 2.0)
        if tangent_length >= 0.5 * min(lengths[i - 1], lengths[i]):
            raise GeometryError(
                "rounding radius too large for the adjacent edges",
                {"radius": radius, "vertex": i},
            )
        start = vertices[i] - d_in * tangent_length
        end = vertices[i] + d_out * tangent_length
        center = start + 1j * d_in * radius * math.copysign(1.0, turning)
        arc = Arc(center, radius, float(np.angle(start - center)), turning)
        arcs.append((start, end, arc))
    pieces: list[Piece] = []
    for i in range(n):
        _, end, arc = arcs[i]
        next_start = arcs[(i + 1) % n][0]
        pieces.append(arc)
        pieces.append(Segment(end, next_start))
    return PanelCurve(pieces)


def curve_from_spec(spec: BoundaryCurve) -> Curve:
    """Build the numerical curve of a boundary-curve specification."""
    if isinstance(spec, Disk):
        return CircleCurve(spec.center, spec.radius)
    if isinstance(spec, Polygon):
        return polygon_curve(spec.vertices)
    if isinstance(spec, SmoothJordan):
        return FourierCurve(spec.center, spec.coefficients)
    raise GeometryError(f"unsupported boundary curve: {type(spec).__name__}")


def crossing_pairs(
    first: ComplexArray, second: ComplexArray | None = None
) -> NDArray[np.intp]:
    """Index pairs of intersecting segments of closed polylines.

    With one argument, adjacent segments of the same ring are ignored.

    Args:
        first: Closed ring (last point connects back to the first).
        second: Optional second ring tested against the first.

    Returns:
        Array of shape (k, 2) with intersecting segment indices.
    """
    a, b = first, np.roll(first, -1)
    if second is None:
        c, d = a, b
    else:
        c, d = second, np.roll(second, -1)
    a, b = a[:, None], b[:, None]
    c, d = c[None, :], d[None, :]

    def orient(u: ComplexArray, v: ComplexArray, w: ComplexArray) -> FloatArray:
        return np.imag(np.conj(v - u) * (w - u))

    straddle = (orient(a, b, c) * orient(a, b, d) <= 0.0) & (
        orient(c, d, a) * orient(c, d, b) <= 0.0
    )
    overlap = (
        (np.maximum(np.minimum(a.real, b.real), np.minimum(c.real, d.real))
         <= np.minimum(np.maximum(a.real, b.real), np.maximum(c.real, d.real)))
        & (np.maximum(np.minimum(a.imag, b.imag), np.minimum(c.imag, d.imag))
           <= np.minimum(np.maximum(a.imag, b.imag), np.maximum(c.imag, d.imag)))
    )
    hits = straddle & overlap
    if second is None:
        n = first.size
        i, j = np.indices((n, n))
        adjacent = (np.abs(i - j) <= 1) | (np.abs(i - j) == n - 1)
        hits &= ~adjacent & (i < j)
    return np.argwhere(hits)

