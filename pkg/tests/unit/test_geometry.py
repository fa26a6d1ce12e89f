"""Unit tests for boundary curves, quadrature, membership and domain files."""

import itertools
import math
from pathlib import Path

import numpy as np
import pytest
from scipy import special

from conformal_rigidity.geometry.measures import (
    area,
    boundary_quadrature,
    contains,
    dist_boundary,
    inverted_complement_volume,
    perimeter,
    planar_domain,
)
from conformal_rigidity.geometry.quadrature import graded_breakpoints, panel_rule
from conformal_rigidity.geometry.specfile import load_domain, parse_domain
from conformal_rigidity.models.domain import (
    Annulus,
    Disk,
    MultiplyConnected,
    Polygon,
    Punctured,
    RoundedPolygon,
    SmoothJordan,
)
from conformal_rigidity.models.errors import (
    ConfigurationError,
    DomainMembershipError,
    GeometryError,
)
from tests.conftest import write_domain


class TestQuadratureRules:
    """Tests for panel and trapezoid rules."""

    def test_graded_breakpoints(self) -> None:
        """Test that grading clusters breakpoints at both ends."""
        points = graded_breakpoints(4, 0.5, 3)
        assert points[0] == 0.0
        assert points[-1] == 1.0
        assert np.all(np.diff(points) > 0.0)
        assert points[1] == pytest.approx(0.25 * 0.125)

    def test_panel_rule_integrates_polynomials(self) -> None:
        """Test exactness of the composite Gauss rule."""
        x, w = panel_rule(graded_breakpoints(3, 0.2, 2), 8)
        assert np.sum(w) == pytest.approx(1.0)
        assert np.sum(w * x**5) == pytest.approx(1.0 / 6.0)

    def test_disk_rule(self, unit_disk: Disk) -> None:
        """Test total length and area of the disk rule."""
        rule = boundary_quadrature(unit_disk, 64)
        assert rule.size == 64
        assert rule.total_length == pytest.approx(2.0 * math.pi)
        enclosed = rule.contour_integral(np.conj(rule.nodes)) / 2j
        assert enclosed.real == pytest.approx(math.pi)

    def test_square_rule(self, square: Polygon) -> None:
        """Test that graded panels integrate length and area exactly."""
        rule = planar_domain(square).quadrature()
        assert rule.total_length == pytest.approx(8.0)
        enclosed = rule.contour_integral(np.conj(rule.nodes)) / 2j
        assert enclosed.real == pytest.approx(4.0)

    def test_hole_orientation(self, annulus: Annulus) -> None:
        """Test that the hole is traversed clockwise."""
        rule = planar_domain(annulus).quadrature(128)
        enclosed = rule.contour_integral(np.conj(rule.nodes)) / 2j
        assert enclosed.real == pytest.approx(math.pi * (1.0 - 0.0625))
        assert set(rule.component.tolist()) == {0, 1}

    def test_too_few_nodes(self, unit_disk: Disk) -> None:
        """Test the node count guard."""
        with pytest.raises(ConfigurationError):
            boundary_quadrature(unit_disk, 4)


class TestMeasures:
    """Tests for area, perimeter, membership and boundary distance."""

    def test_area_and_perimeter(
        self, unit_disk: Disk, annulus: Annulus, square: Polygon, ellipse: SmoothJordan
    ) -> None:
        """Test closed-form measures."""
        assert area(unit_disk) == pytest.approx(math.pi)
        assert area(annulus) == pytest.approx(math.pi * 0.9375)
        assert perimeter(annulus) == pytest.approx(2.5 * math.pi)
        assert area(square) == pytest.approx(4.0)
        assert perimeter(square) == pytest.approx(8.0)
        assert area(ellipse) == pytest.approx(math.pi * 1.3 * 0.7)

    def test_punctures_do_not_change_measures(self, unit_disk: Disk) -> None:
        """Test that punctures are polar for every measure."""
        punctured = Punctured(base=unit_disk, punctures=(0.5 + 0j,))
        assert area(punctured) == area(unit_disk)
        assert perimeter(punctured) == perimeter(unit_disk)
        assert dist_boundary(punctured, 0.5 + 1e-3j) == pytest.approx(0.5, abs=1e-3)
        assert not contains(punctured, 0.5 + 0j)

    def test_contains(self, annulus: Annulus, square: Polygon) -> None:
        """Test membership queries."""
        assert contains(annulus, 0.5 + 0j)
        assert not contains(annulus, 0.1 + 0j)
        assert not contains(annulus, 1.5 + 0j)
        assert contains(square, 0.9 + 0.9j)
        assert not contains(square, 1.1 + 0j)

    def test_dist_boundary(self, annulus: Annulus, square: Polygon) -> None:
        """Test distances to the nearest component."""
        assert dist_boundary(annulus, 0.5 + 0j) == pytest.approx(0.25)
        assert dist_boundary(annulus, 0.8j) == pytest.approx(0.2)
        assert dist_boundary(square, 0.5 + 0.2j) == pytest.approx(0.5)

    def test_dist_boundary_outside(self, unit_disk: Disk) -> None:
        """Test that exterior points are rejected."""
        with pytest.raises(DomainMembershipError) as exc_info:
            dist_boundary(unit_disk, 2.0 + 0j)
        assert exc_info.value.details["point"] == [2.0, 0.0]

    def test_centroid(self) -> None:
        """Test the area centroid of a shifted disk."""
        domain = planar_domain(Disk(center=0.3 - 0.2j, radius=0.5))
        assert domain.centroid == pytest.approx(0.3 - 0.2j)

    def test_interior_samples(self, holed_disk: MultiplyConnected) -> None:
        """Test that samples are interior, reproducible and honor the margin."""
        domain = planar_domain(holed_disk)
        first = domain.interior_samples(50, np.random.default_rng(3), margin=0.05)
        second = domain.interior_samples(50, np.random.default_rng(3), margin=0.05)
        assert first.size == 50
        assert np.array_equal(first, second)
        assert np.all(domain.contains(first))
        assert min(domain.dist_boundary(z) for z in first) > 0.05


class TestBoundaryInvariants:
    """Tests for trapezoid accuracy and rigid-motion invariance."""

    def test_ellipse_perimeter(self) -> None:
        """Test the 2:1 ellipse perimeter against 4a E(1 - b^2/a^2)."""
        spec = SmoothJordan(coefficients=((1, 1.5), (-1, 0.5)))
        exact = 8.0 * float(special.ellipe(0.75))
        assert boundary_quadrature(spec, 256).total_length == pytest.approx(exact, abs=1e-10)

    def test_trapezoid_convergence(self) -> None:
        """Test that each doubling of the nodes cuts the error at least fourfold."""
        spec = SmoothJordan(coefficients=((1, 1.5), (-1, 0.5)))
        exact = 8.0 * float(special.ellipe(0.75))
        errors = [abs(boundary_quadrature(spec, n).total_length - exact) for n in (8, 16, 32, 64)]
        for coarse, fine in itertools.pairwise(errors):
            assert fine <= coarse / 4.0 or fine < 1e-12
        assert errors[-1] < 1e-12

    @pytest.mark.parametrize(("angle", "shift"), [(0.9, 2.0 - 1.0j), (-2.5, -0.3 + 4.0j)])
    def test_rigid_motion(
        self, square: Polygon, ellipse: SmoothJordan, angle: float, shift: complex
    ) -> None:
        """Test that area and perimeter survive rotation and translation."""
        turn = complex(math.cos(angle), math.sin(angle))
        moved = [
            (square, Polygon(vertices=tuple(turn * v + shift for v in square.vertices))),
            (
                RoundedPolygon(vertices=square.vertices, radius=0.2),
                RoundedPolygon(
                    vertices=tuple(turn * v + shift for v in square.vertices), radius=0.2
                ),
            ),
            (
                ellipse,
                SmoothJordan(
                    center=shift,
                    coefficients=tuple((k, turn * c) for k, c in ellipse.coefficients),
                ),
            ),
            (Annulus(r_inner=0.25, r_outer=1.0), Annulus(center=shift, r_inner=0.25, r_outer=1.0)),
        ]
        for original, image in moved:
            assert area(image) == pytest.approx(area(original), rel=1e-12)
            assert perimeter(image) == pytest.approx(perimeter(original), rel=1e-12)


class TestGeometryValidation:
    """Tests for invariants checked by the planar domain."""

    def test_self_intersecting_curve(self) -> None:
        """Test rejection of a curve that winds three times."""
        spec = SmoothJordan(coefficients=((1, 1.0), (3, 0.9)))
        with pytest.raises(GeometryError):
            planar_domain(spec)

    def test_hole_outside(self) -> None:
        """Test rejection of a hole that leaves the outer curve."""
        spec = MultiplyConnected(outer=Disk(radius=1.0), holes=(Disk(center=0.9, radius=0.3),))
        with pytest.raises(GeometryError):
            planar_domain(spec)

    def test_overlapping_holes(self) -> None:
        """Test rejection of intersecting holes."""
        spec = MultiplyConnected(
            outer=Disk(radius=1.0),
            holes=(Disk(center=-0.1, radius=0.2), Disk(center=0.1, radius=0.2)),
        )
        with pytest.raises(GeometryError):
            planar_domain(spec)

    def test_puncture_outside(self, unit_disk: Disk) -> None:
        """Test rejection of a puncture outside the base domain."""
        with pytest.raises(GeometryError):
            planar_domain(Punctured(base=unit_disk, punctures=(2.0 + 0j,)))

    def test_rounding_too_large(self, square: Polygon) -> None:
        """Test rejection of an arc that does not fit the edges."""
        with pytest.raises(GeometryError):
            planar_domain(RoundedPolygon(vertices=square.vertices, radius=5.0))

    def test_rounded_square_measures(self, square: Polygon) -> None:
        """Test that rounding removes (4 - pi) r^2 of area."""
        r = 0.2
        rounded = planar_domain(RoundedPolygon(vertices=square.vertices, radius=r))
        assert rounded.area == pytest.approx(4.0 - (4.0 - math.pi) * r * r)
        assert rounded.perimeter == pytest.approx(8.0 - 8.0 * r + 2.0 * math.pi * r)
        assert rounded.corners() == []


class TestInvertedComplementVolume:
    """Tests for the volume of the inverted complement."""

    @pytest.mark.parametrize(
        ("z0", "center", "radius"),
        [(0j, 0j, 1.0), (0.4 + 0j, 0j, 1.0), (0.1 + 0.1j, 0.5 - 0.25j, 0.8)],
    )
    def test_disk_closed_form(self, z0: complex, center: complex, radius: float) -> None:
        """Test pi r^2 / (r^2 - |z0 - center|^2)^2."""
        exact = math.pi * radius**2 / (radius**2 - abs(z0 - center) ** 2) ** 2
        value = inverted_complement_volume(Disk(center=center, radius=radius), z0)
        assert value == pytest.approx(exact, rel=1e-9)

    @pytest.mark.parametrize(
        ("fixture", "z0", "rel"),
        [
            ("square", 0.2 + 0.1j, 1e-6),
            ("triangle", 1.0 + 0.5j, 1e-6),
            ("unit_disk", 0.4 - 0.3j, 1e-5),
            ("ellipse", 0.2 + 0.1j, 1e-5),
        ],
    )
    def test_methods_agree(
        self, request: pytest.FixtureRequest, fixture: str, z0: complex, rel: float
    ) -> None:
        """Test that contour reduction and ray integration agree.

        Ray integration runs on the default polyline, exact for polygons and
        second-order accurate on curved boundaries.
        """
        spec = request.getfixturevalue(fixture)
        boundary = inverted_complement_volume(spec, z0)
        polar = inverted_complement_volume(spec, z0, method="polar")
        assert polar == pytest.approx(boundary, rel=rel)

    def test_methods_agree_on_disk_closed_form(self) -> None:
        """Test both methods against pi r^2 / (r^2 - |z0 - center|^2)^2."""
        spec = Disk(center=0.5 - 0.25j, radius=0.8)
        exact = math.pi * 0.64 / (0.64 - abs(0.1 + 0.1j - spec.center) ** 2) ** 2
        assert inverted_complement_volume(spec, 0.1 + 0.1j) == pytest.approx(exact, rel=1e-9)
        polar = inverted_complement_volume(spec, 0.1 + 0.1j, method="polar")
        assert polar == pytest.approx(exact, rel=1e-5)

    def test_annulus_includes_the_hole(self, annulus: Annulus) -> None:
        """Test that the hole adds to the disk value."""
        disk_value = inverted_complement_volume(Disk(radius=1.0), 0.5 + 0j)
        assert inverted_complement_volume(annulus, 0.5 + 0j) > disk_value


class TestDomainFiles:
    """Tests for the domain-file parser."""

    def test_parse_disk(self) -> None:
        """Test the minimal disk file."""
        spec, name = parse_domain({"type": "disk", "radius": 2.0, "name": "big"})
        assert spec == Disk(radius=2.0)
        assert name == "big"

    def test_parse_annulus(self) -> None:
        """Test annulus files."""
        spec, _ = parse_domain(
            {"type": "annulus", "center": [1, 1], "r_inner": 0.3, "r_outer": 0.9}
        )
        assert spec == Annulus(center=1 + 1j, r_inner=0.3, r_outer=0.9)

    def test_parse_holes_and_punctures(self) -> None:
        """Test that holes and punctures wrap the outer curve."""
        spec, _ = parse_domain(
            {
                "type": "polygon",
                "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]],
                "holes": [{"type": "disk", "radius": 0.3}],
                "punctures": [[0.6, 0.6]],
            }
        )
        assert isinstance(spec, Punctured)
        assert isinstance(spec.base, MultiplyConnected)
        assert spec.base.holes == (Disk(radius=0.3),)

    def test_parse_fourier(self) -> None:
        """Test smooth curves given by Fourier terms."""
        spec, _ = parse_domain({"type": "smooth_jordan", "fourier": [[1, [1, 0]], [-1, [0.3, 0]]]})
        assert spec == SmoothJordan(coefficients=((1, 1.0), (-1, 0.3)))

    @pytest.mark.parametrize(
        "data",
        [
            {"type": "disk"},
            {"type": "disk", "radius": 1.0, "colour": "red"},
            {"type": "annulus", "r_inner": 1.0, "r_outer": 0.5},
            {"type": "square", "radius": 1.0},
            {"type": "polygon", "vertices": [[0, 0], [0, 1], [1, 1], [1, 0]]},
        ],
    )
    def test_invalid_files(self, data: dict[str, object]) -> None:
        """Test that malformed objects raise geometry errors."""
        with pytest.raises(GeometryError):
            parse_domain(data)

    def test_load_domain(self, tmp_path: Path) -> None:
        """Test reading a file from disk."""
        path = write_domain(tmp_path, "disk.json", {"type": "disk", "radius": 1.0})
        spec, name = load_domain(path)
        assert spec == Disk(radius=1.0)
        assert name is None

    def test_load_invalid_json(self, tmp_path: Path) -> None:
        """Test rejection of broken JSON."""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(GeometryError):
            load_domain(path)

    def test_load_missing_file(self, tmp_path: Path) -> None:
        """Test that a missing file surfaces as an OS error."""
        with pytest.raises(FileNotFoundError):
            load_domain(tmp_path / "absent.json")
