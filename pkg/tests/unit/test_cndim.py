"""Unit tests for closed forms on balls and polydisks."""

import math

import pytest

from conformal_rigidity.models.cn import Ball, Polydisk
from conformal_rigidity.models.domain import Disk
from conformal_rigidity.models.errors import DomainMembershipError, UnsupportedConfigurationError
from conformal_rigidity.services.cndim import (
    azukawa_volume,
    ball_bergman,
    bergman_at,
    delta_bounds_check,
    polydisk_bergman,
)
from conformal_rigidity.services.green import log_capacity, solve_green
from conformal_rigidity.services.kernels import bergman_kernel


class TestBergman:
    """Tests for diagonal Bergman kernels."""

    @pytest.mark.parametrize(
        ("n", "radius", "expected"),
        [(1, 1.0, 1.0 / math.pi), (2, 1.0, 2.0 / math.pi**2), (3, 2.0, 3.0 / (32.0 * math.pi**3))],
    )
    def test_ball_center(self, n: int, radius: float, expected: float) -> None:
        """Test n! r^2 / (pi^n r^(2n+2)) at the center."""
        assert ball_bergman(n, radius) == pytest.approx(expected, rel=1e-12)

    def test_ball_off_center(self) -> None:
        """Test the unit disk kernel as the n = 1 ball."""
        assert ball_bergman(1, 1.0, [0.6j]) == pytest.approx(1.0 / (math.pi * 0.64**2))

    def test_polydisk_center(self) -> None:
        """Test the product of disk kernels."""
        assert polydisk_bergman((1.0, 2.0)) == pytest.approx(1.0 / (4.0 * math.pi**2))

    def test_absolute_point(self) -> None:
        """Test that points are taken relative to the center."""
        spec = Ball(n=2, center=(1 + 0j, -1j), radius=1.0)
        assert bergman_at(spec, [1.5 + 0j, -1j]) == pytest.approx(
            ball_bergman(2, 1.0, [0.5 + 0j, 0j])
        )
        assert bergman_at(spec) == pytest.approx(2.0 / math.pi**2)

    def test_outside(self) -> None:
        """Test rejection of points outside the closed domain."""
        with pytest.raises(DomainMembershipError):
            ball_bergman(2, 1.0, [0.8 + 0j, 0.8 + 0j])
        with pytest.raises(DomainMembershipError):
            polydisk_bergman((1.0, 2.0), [0j, 2.0 + 0j])

    def test_wrong_dimension(self) -> None:
        """Test rejection of points with the wrong number of coordinates."""
        with pytest.raises(UnsupportedConfigurationError):
            ball_bergman(2, 1.0, [0j])


class TestBounds:
    """Tests for the delta bounds and the Azukawa volume."""

    def test_azukawa_volume(self) -> None:
        """Test indicatrix volumes at the center."""
        assert azukawa_volume(Ball(n=2, radius=1.0)) == pytest.approx(math.pi**2 / 2.0)
        assert azukawa_volume(Polydisk(radii=(1.0, 2.0))) == pytest.approx(4.0 * math.pi**2)

    @pytest.mark.parametrize(("n", "radius"), [(1, 1.0), (2, 1.0), (3, 2.0)])
    def test_ball_equality(self, n: int, radius: float) -> None:
        """Test that both bounds are equalities on balls."""
        record = delta_bounds_check(Ball(n=n, radius=radius))
        assert record.bounds_hold
        assert record.kernel_equality
        assert record.volume_equality

    def test_polydisk_strict(self) -> None:
        """Test strict bounds on a non-ball."""
        record = delta_bounds_check(Polydisk(radii=(1.0, 2.0)))
        assert record.delta == 1.0
        assert record.bounds_hold
        assert not record.kernel_equality
        assert not record.volume_equality

    def test_off_center_unsupported(self) -> None:
        """Test that only the center is supported."""
        with pytest.raises(UnsupportedConfigurationError):
            delta_bounds_check(Ball(n=2, radius=1.0), [0.1 + 0j, 0j])
        with pytest.raises(UnsupportedConfigurationError):
            azukawa_volume(Polydisk(radii=(1.0,)), [0.5 + 0j])

    def test_explicit_center_accepted(self) -> None:
        """Test that passing the center itself is allowed."""
        spec = Polydisk(radii=(1.0, 1.0), center=(2 + 0j, 0j))
        assert azukawa_volume(spec, [2 + 0j, 0j]) == pytest.approx(math.pi**2)



class TestPlanarConsistency:
    """Tests that the closed forms agree with the planar solvers."""

    def test_polydisk_product(self) -> None:
        """Test the polydisk kernel as a product of solved disk kernels."""
        point = [0.3 + 0j, 0.5j]
        product = (
            bergman_kernel(Disk(radius=1.0), point[0]).value
            * bergman_kernel(Disk(radius=2.0), point[1]).value
        )
        assert polydisk_bergman((1.0, 2.0), point) == pytest.approx(product, rel=1e-10)

    @pytest.mark.parametrize(("radius", "z"), [(1.0, 0.4 + 0j), (2.0, -0.5 + 0.7j)])
    def test_ball_reduces_to_disk(self, radius: float, z: complex) -> None:
        """Test that the one-dimensional ball kernel is the planar disk kernel."""
        solved = bergman_kernel(Disk(radius=radius), z).value
        assert ball_bergman(1, radius, [z]) == pytest.approx(solved, rel=1e-8)

    @pytest.mark.parametrize("radius", [0.5, 1.0, 3.0])
    def test_ball_volume_matches_capacity(self, radius: float) -> None:
        """Test v(I^A) = pi / c_beta^2 for the one-dimensional ball."""
        c_beta = log_capacity(solve_green(Disk(radius=radius), 0j))
        spec = Ball(n=1, radius=radius)
        assert azukawa_volume(spec) == pytest.approx(math.pi / c_beta**2, rel=1e-8)
        record = delta_bounds_check(spec)
        assert math.pi * record.kernel == pytest.approx(1.0 / record.delta**2, rel=1e-12)
        assert record.kernel == pytest.approx(
            bergman_kernel(Disk(radius=radius), 0j).value, rel=1e-8
        )
