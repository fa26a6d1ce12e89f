"""Rank-revealing solves shared by the Green and kernel solvers."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from conformal_rigidity.geometry.quadrature import ComplexArray, FloatArray
from conformal_rigidity.models.errors import ConditioningError

logger = logging.getLogger(__name__)


def truncated_lstsq(
    matrix: FloatArray, rhs: FloatArray, cutoff: float
) -> tuple[FloatArray, int]:
    """Least-squares solve with column equilibration and a relative SVD cutoff.

    Args:
        matrix: Design matrix (rows are collocation points).
        rhs: Right-hand side.
        cutoff: Singular values below ``cutoff * s_max`` are discarded.

    Returns:
        Tuple of the coefficient vector and the numerical rank.
    """
    norms = np.linalg.norm(matrix, axis=0)
    norms[norms == 0.0] = 1.0
    solution, _, rank, _ = linalg.lstsq(
        matrix / norms, rhs, cond=cutoff, lapack_driver="gelsd"
    )
    return solution / norms, int(rank)


@dataclass(frozen=True)
class GramSystem:
    """Truncated factorization A ~ V diag(s^2) V^H of a Hermitian Gram matrix.

    Attributes:
        vectors: Retained orthonormal directions V (columns).
        roots: Square roots s of the retained eigenvalues.
        condition: Ratio of the largest to the smallest retained eigenvalue.
        dropped: Number of discarded directions.
    """

    vectors: ComplexArray
    roots: FloatArray
    condition: float
    dropped: int

    @classmethod
    def from_gram(cls, gram: ComplexArray, cutoff: float) -> "GramSystem":
        """Factor an assembled Gram matrix with a Hermitian eigendecomposition.

        Eigenvalues below ``cutoff * lambda_max`` are treated as noise.

        Raises:
            ConditioningError: If no eigenvalue survives the cutoff.
        """
        hermitian = 0.5 * (gram + gram.conj().T)
        values, vectors = linalg.eigh(hermitian)
        top = float(values[-1])
        if not top > 0.0:
            raise ConditioningError("Gram matrix has no positive spectrum", condition=np.inf)
        keep = values > cutoff * top
        return cls._retain(vectors[:, keep], values[keep], int((~keep).sum()))

    @classmethod
    def from_samples(cls, samples: ComplexArray, cutoff: float) -> "GramSystem":
        """Factor A = M^H M from its weighted sample matrix M by an SVD.

        The cutoff applies to singular values of M, which the SVD resolves to
        working precision without squaring.
        """
        _, singular, vh = linalg.svd(samples, full_matrices=False)
        if not singular.size or not singular[0] > 0.0:
            raise ConditioningError("sample matrix is zero", condition=np.inf)
        keep = singular > cutoff * singular[0]
        return cls._retain(vh.conj().T[:, keep], singular[keep] ** 2, int((~keep).sum()))

    @classmethod
    def _retain(cls, vectors: ComplexArray, values: FloatArray, dropped: int) -> "GramSystem":
        if values.size == 0:
            raise ConditioningError("no direction survives the cutoff", condition=np.inf)
        condition = float(values.max() / values.min())
        return cls(vectors=vectors, roots=np.sqrt(values), condition=condition, dropped=dropped)

    def norm_squared(self, coefficients: NDArray[np.complex128]) -> float:
        """c^H A c evaluated on the retained spectrum."""
        projected = self.roots * (self.vectors.conj().T @ coefficients)
        return float(np.vdot(projected, projected).real)

    def constrained_minimum(
        self, constraints: ComplexArray, target: int
    ) -> tuple[float, ComplexArray]:
        """Minimize c^H A c subject to L c = e_target.

        With x = diag(s) V^H c the problem becomes min ||x|| subject to F x = e,
        F = L V diag(1/s), whose minimum-norm solution is F^+ e.

        Args:
            constraints: Constraint rows L (one row per pinned functional).
            target: Index of the functional pinned to one; the others vanish.

        Returns:
            Tuple of the minimum of c^H A c and the minimizing coefficients c.

        Raises:
            ConditioningError: If the constraints cannot be met in the retained span.
        """
        reduced = (constraints @ self.vectors) / self.roots
        rhs = np.zeros(constraints.shape[0], dtype=complex)
        rhs[target] = 1.0
        x, _, rank, singular = linalg.lstsq(reduced, rhs, lapack_driver="gelsd")
        mismatch = float(np.linalg.norm(reduced @ x - rhs))
        if rank < constraints.shape[0] or mismatch > 1e-8:
            raise ConditioningError(
                "constraints are not representable in the retained basis span",
                condition=float(singular[0] / singular[-1]) if singular[-1] > 0 else np.inf,
                details={"rank": int(rank), "mismatch": mismatch},
            )
        minimum = float(np.vdot(x, x).real)
        coefficients = self.vectors @ (x / self.roots)
        logger.debug(
            "Constrained minimum norm",
            extra={"retained": int(self.roots.size), "dropped": self.dropped, "minimum": minimum},
        )
        return minimum, coefficients
