"""Boundary quadrature rules.

Smooth periodic components use the equispaced trapezoid rule; panel curves
(polygons and corner-rounded polygons) use Gauss-Legendre nodes on panels that
are graded geometrically toward every breakpoint.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes, arclength weights and unit tangents on the whole boundary.

    Tangents follow the positive orientation of the domain (domain on the
    left), so holes are traversed clockwise and ``tangents * weights`` is the
    complex line element ``dz``.

    Attributes:
        nodes: Boundary points.
        weights: Positive arclength weights.
        tangents: Unit tangents in the positive orientation.
        component: Index of the boundary component each node belongs to.
    """

    nodes: ComplexArray
    weights: FloatArray
    tangents: ComplexArray
    component: NDArray[np.int64]

    def __post_init__(self) -> None:
        for array in (self.nodes, self.weights, self.tangents, self.component):
            array.setflags(write=False)

    @property
    def size(self) -> int:
        """Number of nodes."""
        return int(self.nodes.size)

    @property
    def dz(self) -> ComplexArray:
        """Complex line element at each node."""
        return self.tangents * self.weights

    @property
    def normals(self) -> ComplexArray:
        """Unit normals pointing out of the domain."""
        return -1j * self.tangents

    @property
    def total_length(self) -> float:
        """Sum of weights, the discrete boundary length."""
        return float(self.weights.sum())

    def integrate(self, values: NDArray[np.generic]) -> complex:
        """Arclength integral of samples given at the nodes."""
        return complex(np.sum(values * self.weights))

    def contour_integral(self, values: NDArray[np.generic]) -> complex:
        """Contour integral of samples against ``dz`` in the positive orientation."""
        return complex(np.sum(values * self.dz))

    @classmethod
    def concatenate(
        cls, parts: list[tuple[ComplexArray, FloatArray, ComplexArray]]
    ) -> "QuadratureRule":
        """Join per-component rules, numbering components in order."""
        nodes = np.concatenate([p[0] for p in parts])
        weights = np.concatenate([p[1] for p in parts])
        tangents = np.concatenate([p[2] for p in parts])
        component = np.concatenate(
            [np.full(p[0].size, index, dtype=np.int64) for index, p in enumerate(parts)]
        )
        return cls(nodes=nodes, weights=weights, tangents=tangents, component=component)


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> tuple[FloatArray, FloatArray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def trapezoid_parameters(n: int) -> FloatArray:
    """Equispaced parameters on [0, 2 pi)."""
    return 2.0 * np.pi * np.arange(n) / n


def graded_breakpoints(panels: int, ratio: float, levels: int) -> FloatArray:
    """Panel breakpoints on [0, 1], graded geometrically toward both ends.

    The interval is split into ``panels`` equal panels; the first and last are
    subdivided at distances ``h * ratio**k`` (k = 1..levels) from the endpoint.

    Args:
        panels: Number of uniform panels (at least 2).
        ratio: Geometric grading ratio in (0, 1).
        levels: Number of graded sub-panels at each end.

    Returns:
        Strictly increasing breakpoints starting at 0 and ending at 1.
    """
    h = 1.0 / panels
    uniform = np.linspace(0.0, 1.0, panels + 1)
    graded = h * ratio ** np.arange(1, levels + 1)
    points = np.concatenate([uniform, graded, 1.0 - graded])
    return np.unique(points)


def panel_rule(breakpoints: FloatArray, order: int) -> tuple[FloatArray, FloatArray]:
    """Composite Gauss rule on [0, 1] over the given breakpoints."""
    x, w = gauss_legendre(order)
    left = breakpoints[:-1, None]
    width = np.diff(breakpoints)[:, None]
    return (left + width * x).ravel(), (width * w).ravel()
