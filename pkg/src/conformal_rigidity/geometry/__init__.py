"""Planar geometry: boundary curves, quadrature rules and measures."""

from conformal_rigidity.geometry.curves import (
    CircleCurve,
    Corner,
    Curve,
    FourierCurve,
    PanelCurve,
    crossing_pairs,
    curve_from_spec,
    polygon_curve,
    rounded_polygon_curve,
)
from conformal_rigidity.geometry.measures import (
    area,
    boundary_quadrature,
    contains,
    dist_boundary,
    inverted_complement_volume,
    perimeter,
    planar_domain,
)
from conformal_rigidity.geometry.planar import BoundaryComponent, PlanarDomain
from conformal_rigidity.geometry.quadrature import QuadratureRule
from conformal_rigidity.geometry.specfile import load_domain, parse_domain

__all__ = [
    # Curves
    "CircleCurve",
    "Corner",
    "Curve",
    "FourierCurve",
    "PanelCurve",
    "crossing_pairs",
    "curve_from_spec",
    "polygon_curve",
    "rounded_polygon_curve",
    # Domain
    "BoundaryComponent",
    "PlanarDomain",
    "QuadratureRule",
    # Measures
    "area",
    "boundary_quadrature",
    "contains",
    "dist_boundary",
    "inverted_complement_volume",
    "perimeter",
    "planar_domain",
    # Files
    "load_domain",
    "parse_domain",
]
