"""Unit tests for expansion bases and rank-revealing solves."""

import numpy as np
import pytest

from conformal_rigidity.config.settings import SolverConfig
from conformal_rigidity.geometry.measures import planar_domain
from conformal_rigidity.models.domain import Annulus, Polygon
from conformal_rigidity.models.errors import ConditioningError
from conformal_rigidity.models.results import BasisDescriptor
from conformal_rigidity.services.basis import (
    conjugate_antiderivatives,
    corner_poles,
    harmonic_basis,
    harmonic_columns,
    holomorphic_basis,
    terms,
)
from conformal_rigidity.services.linalg import GramSystem, truncated_lstsq


@pytest.fixture
def square_basis(square: Polygon) -> BasisDescriptor:
    """Holomorphic basis of the square with corner poles."""
    return holomorphic_basis(planar_domain(square), 12, SolverConfig(corner_poles=4))


@pytest.fixture
def annulus_basis(annulus: Annulus) -> BasisDescriptor:
    """Holomorphic basis of the annulus with hole terms."""
    return holomorphic_basis(planar_domain(annulus), 10, SolverConfig(hole_basis_size=5))


class TestBasisLayout:
    """Tests for basis descriptors."""

    def test_corner_poles_outside(self, square: Polygon) -> None:
        """Test that corner poles lie outside the closed square."""
        poles = corner_poles(planar_domain(square), 6, 4.0)
        assert len(poles) == 24
        assert all(max(abs(p.pole.real), abs(p.pole.imag)) > 1.0 for p in poles)

    def test_no_poles_on_smooth_domains(self, annulus: Annulus) -> None:
        """Test that smooth domains get no corner poles."""
        assert corner_poles(planar_domain(annulus), 6, 4.0) == ()

    def test_harmonic_size(self, annulus: Annulus) -> None:
        """Test that the column count matches the descriptor size."""
        descriptor = harmonic_basis(planar_domain(annulus), 10, SolverConfig(hole_basis_size=5))
        columns = harmonic_columns(descriptor, np.array([0.5 + 0j, -0.6j]))
        assert columns.shape == (2, descriptor.size)
        assert descriptor.size == 1 + 20 + 1 + 10

    def test_holomorphic_size(
        self, annulus_basis: BasisDescriptor, square_basis: BasisDescriptor
    ) -> None:
        """Test holomorphic term counts."""
        assert terms(annulus_basis, np.array([0.5 + 0j])).shape == (1, 15)
        assert terms(square_basis, np.array([0.1 + 0j])).shape == (1, 12 + 16)

    def test_terms_bounded(self, annulus_basis: BasisDescriptor, annulus: Annulus) -> None:
        """Test that every term has modulus at most one on the boundary."""
        nodes = planar_domain(annulus).quadrature(256).nodes
        assert np.abs(terms(annulus_basis, nodes)).max() <= 1.0 + 1e-12


class TestBasisDerivatives:
    """Tests for derivative and antiderivative columns."""

    @pytest.mark.parametrize("order", [1, 2])
    def test_derivatives(
        self, annulus_basis: BasisDescriptor, square_basis: BasisDescriptor, order: int
    ) -> None:
        """Test term derivatives against central differences."""
        z, h = 0.45 + 0.2j, 1e-4
        for descriptor in (annulus_basis, square_basis):
            lower = terms(descriptor, np.array([z - h]), order=order - 1)
            upper = terms(descriptor, np.array([z + h]), order=order - 1)
            exact = terms(descriptor, np.array([z]), order=order)
            assert np.allclose((upper - lower) / (2 * h), exact, rtol=1e-5, atol=1e-6)

    def test_conjugate_antiderivatives(
        self, annulus_basis: BasisDescriptor, square_basis: BasisDescriptor
    ) -> None:
        """Test d Psi / d(conj z) = conj(u) by central differences."""
        z, h = 0.45 + 0.2j, 1e-5
        for descriptor in (annulus_basis, square_basis):
            dx = conjugate_antiderivatives(descriptor, np.array([z + h, z - h]))
            dy = conjugate_antiderivatives(descriptor, np.array([z + 1j * h, z - 1j * h]))
            wirtinger = 0.5 * ((dx[0] - dx[1]) + 1j * (dy[0] - dy[1])) / (2 * h)
            expected = np.conj(terms(descriptor, np.array([z]))[0])
            assert np.allclose(wirtinger, expected, rtol=1e-5, atol=1e-6)


class TestLinearAlgebra:
    """Tests for truncated least squares and Gram systems."""

    def test_truncated_lstsq(self) -> None:
        """Test recovery of an exact solution with badly scaled columns."""
        rng = np.random.default_rng(0)
        matrix = rng.standard_normal((40, 5)) * np.array([1.0, 1e3, 1e-3, 1.0, 10.0])
        expected = np.array([1.0, -2.0, 3.0, 0.5, 0.0])
        solution, rank = truncated_lstsq(matrix, matrix @ expected, 1e-12)
        assert rank == 5
        assert np.allclose(solution, expected)

    def test_truncated_rank(self) -> None:
        """Test that duplicated columns lower the rank."""
        column = np.linspace(0.0, 1.0, 10)
        _, rank = truncated_lstsq(np.column_stack([column, column]), column, 1e-12)
        assert rank == 1

    def test_constrained_minimum(self) -> None:
        """Test min c^H A c with c_0 = 1 on a diagonal Gram matrix."""
        system = GramSystem.from_gram(np.diag([2.0, 1.0, 4.0]).astype(complex), 1e-12)
        minimum, coefficients = system.constrained_minimum(np.array([[1.0, 1.0, 1.0]]), 0)
        # min sum a_i |c_i|^2 subject to sum c_i = 1 is 1 / sum(1 / a_i)
        assert minimum == pytest.approx(1.0 / (0.5 + 1.0 + 0.25))
        assert np.sum(coefficients) == pytest.approx(1.0)
        assert system.condition == pytest.approx(4.0)

    def test_samples_match_gram(self) -> None:
        """Test that both factorizations give the same minimum."""
        rng = np.random.default_rng(1)
        samples = rng.standard_normal((30, 4)) + 1j * rng.standard_normal((30, 4))
        constraint = np.array([[1.0, 0.5j, 0.0, 2.0]])
        from_samples = GramSystem.from_samples(samples, 1e-14).constrained_minimum(constraint, 0)
        from_gram = GramSystem.from_gram(samples.conj().T @ samples, 1e-14).constrained_minimum(
            constraint, 0
        )
        assert from_samples[0] == pytest.approx(from_gram[0], rel=1e-10)

    def test_zero_gram(self) -> None:
        """Test that a zero matrix is rejected."""
        with pytest.raises(ConditioningError):
            GramSystem.from_gram(np.zeros((3, 3), dtype=complex), 1e-12)

    def test_unreachable_constraint(self) -> None:
        """Test that a constraint outside the retained span is rejected."""
        system = GramSystem.from_gram(np.diag([1.0, 0.0]).astype(complex), 1e-12)
        with pytest.raises(ConditioningError):
            system.constrained_minimum(np.array([[0.0, 1.0]]), 0)
