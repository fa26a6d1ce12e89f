"""Expansion bases for the Green and kernel solvers.

Every basis is built from one family of holomorphic terms u_m(z):

- powers ((z - c)/s)^k around the area centroid c, scaled by the largest
  distance s from c to the outer boundary,
- inverse powers (r/(z - a))^k per hole, with a the hole centroid and r the
  distance from a to the hole boundary,
- rational terms d/(z - p) with poles clustered exponentially outside every
  corner of a panel boundary (d is the distance from p to the corner).

All terms have modulus at most one on the closed domain. The harmonic basis
uses 1, Re u_m, Im u_m and log|z - a| per hole; the holomorphic basis uses the
terms themselves.
"""

import math

import numpy as np
from numpy.typing import NDArray
from scipy.special import poch

from conformal_rigidity.config.settings import SolverConfig
from conformal_rigidity.geometry.planar import PlanarDomain
from conformal_rigidity.geometry.quadrature import ComplexArray, FloatArray
from conformal_rigidity.models.results import BasisDescriptor, HoleTerms, PoleTerm

CHUNK = 4096


def corner_poles(domain: PlanarDomain, count: int, sigma: float) -> tuple[PoleTerm, ...]:
    """Poles tapered exponentially toward each corner along its outward bisector.

    The j-th pole of a corner sits at distance L exp(-sigma (sqrt(n) - sqrt(j))),
    j = 1..n, where L is half the shorter adjacent edge.
    """
    if count == 0:
        return ()
    poles = []
    j = np.arange(1, count + 1)
    distances = np.exp(-sigma * (math.sqrt(count) - np.sqrt(j)))
    for corner in domain.corners():
        for fraction in distances:
            d = corner.scale * float(fraction)
            poles.append(PoleTerm(pole=corner.vertex + corner.outward * d, scale=d))
    return tuple(poles)


def _frame(domain: PlanarDomain) -> tuple[complex, float]:
    center = domain.centroid
    return center, domain.max_distance_from(center)


def harmonic_basis(domain: PlanarDomain, basis_size: int, config: SolverConfig) -> BasisDescriptor:
    """Harmonic basis of degree ``basis_size`` for the regular part of G."""
    center, scale = _frame(domain)
    holes = tuple(
        HoleTerms(source=a, scale=r, degree=config.hole_basis_size)
        for a, r in domain.hole_sources()
    )
    return BasisDescriptor(
        kind="harmonic",
        center=center,
        scale=scale,
        degree=basis_size,
        holes=holes,
        poles=corner_poles(domain, config.corner_poles, config.corner_pole_sigma),
    )


def holomorphic_basis(
    domain: PlanarDomain, basis_size: int, config: SolverConfig
) -> BasisDescriptor:
    """Holomorphic basis with ``basis_size`` powers plus hole and corner terms."""
    descriptor = harmonic_basis(domain, basis_size, config)
    return descriptor.model_copy(update={"kind": "holomorphic"})


def terms(descriptor: BasisDescriptor, z: ComplexArray, order: int = 0) -> ComplexArray:
    """Derivatives of order ``order`` of the holomorphic terms u_m at z.

    Powers run over k = 0..degree-1 for holomorphic bases and k = 1..degree
    for harmonic ones (the constant is a separate harmonic column).

    Args:
        descriptor: Basis layout.
        z: Evaluation points.
        order: Derivative order.

    Returns:
        Array of shape (len(z), number of terms).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    first = 0 if descriptor.kind == "holomorphic" else 1
    k = np.arange(first, first + descriptor.degree)
    w = (z - descriptor.center) / descriptor.scale
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        falling = np.array([math.perm(int(n), order) for n in k], dtype=float)
        exponent = np.maximum(k - order, 0)
        columns = [falling * w[:, None] ** exponent / descriptor.scale**order]
        for hole in descriptor.holes:
            m = np.arange(1, hole.degree + 1)
            u = hole.scale / (z - hole.source)
            rising = (-1.0) ** order * poch(m, order)
            columns.append(rising * u[:, None] ** m / (z - hole.source)[:, None] ** order)
        if descriptor.poles:
            p = np.array([t.pole for t in descriptor.poles])
            d = np.array([t.scale for t in descriptor.poles])
            factor = (-1.0) ** order * math.factorial(order)
            columns.append(factor * d / (z[:, None] - p) ** (order + 1))
    return np.concatenate(columns, axis=1)


def _log_columns(descriptor: BasisDescriptor, z: ComplexArray) -> FloatArray:
    if not descriptor.holes:
        return np.empty((z.size, 0))
    sources = np.array([h.source for h in descriptor.holes])
    with np.errstate(divide="ignore"):
        return np.log(np.abs(z[:, None] - sources))


def harmonic_columns(descriptor: BasisDescriptor, z: ComplexArray) -> FloatArray:
    """Real design matrix [1 | Re U | Im U | log|z - a_i|] of a harmonic basis."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    u = terms(descriptor, z)
    return np.hstack([np.ones((z.size, 1)), u.real, u.imag, _log_columns(descriptor, z)])


def _split(
    descriptor: BasisDescriptor, coefficients: FloatArray
) -> tuple[float, ComplexArray, FloatArray]:
    m = descriptor.size - 1 - len(descriptor.holes)
    m //= 2
    alpha = coefficients[1 : 1 + m]
    beta = coefficients[1 + m : 1 + 2 * m]
    return float(coefficients[0]), alpha - 1j * beta, coefficients[1 + 2 * m :]


def harmonic_value(
    descriptor: BasisDescriptor, coefficients: FloatArray, z: ComplexArray
) -> FloatArray:
    """Evaluate the harmonic expansion at z (chunked)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    constant, gamma, logs = _split(descriptor, np.asarray(coefficients, dtype=float))
    out = np.empty(z.size)
    for start in range(0, z.size, CHUNK):
        chunk = z[start : start + CHUNK]
        value = constant + (terms(descriptor, chunk) @ gamma).real
        if logs.size:
            value = value + _log_columns(descriptor, chunk) @ logs
        out[start : start + CHUNK] = value
    return out


def harmonic_derivative(
    descriptor: BasisDescriptor, coefficients: FloatArray, z: ComplexArray
) -> ComplexArray:
    """Complex derivative h'(z) of a holomorphic h with Re h = the expansion.

    The gradient of the expansion, written as a complex number, is conj(h'(z)).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _, gamma, logs = _split(descriptor, np.asarray(coefficients, dtype=float))
    out = np.empty(z.size, dtype=complex)
    sources = np.array([h.source for h in descriptor.holes], dtype=complex)
    for start in range(0, z.size, CHUNK):
        chunk = z[start : start + CHUNK]
        value = terms(descriptor, chunk, order=1) @ gamma
        if logs.size:
            value = value + (1.0 / (chunk[:, None] - sources)) @ logs
        out[start : start + CHUNK] = value
    return out


def conjugate_antiderivatives(descriptor: BasisDescriptor, z: ComplexArray) -> ComplexArray:
    """Single-valued functions Psi_m with d Psi_m / d(conj z) = conj(u_m).

    Powers and inverse powers of order >= 2 use the conjugate of their
    antiderivative; 1/(z - a) type terms use log|z - a|^2, which is
    single-valued on the domain.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    k = np.arange(descriptor.degree)
    w = (z - descriptor.center) / descriptor.scale
    columns = [np.conj(descriptor.scale * w[:, None] ** (k + 1) / (k + 1))]
    for hole in descriptor.holes:
        u = hole.scale / (z - hole.source)
        block = np.empty((z.size, hole.degree), dtype=complex)
        block[:, 0] = hole.scale * np.log(np.abs(z - hole.source) ** 2)
        for m in range(2, hole.degree + 1):
            block[:, m - 1] = np.conj(-hole.scale / (m - 1) * u ** (m - 1))
        columns.append(block)
    if descriptor.poles:
        p = np.array([t.pole for t in descriptor.poles])
        d = np.array([t.scale for t in descriptor.poles])
        columns.append((d * np.log(np.abs(z[:, None] - p) ** 2)).astype(complex))
    return np.concatenate(columns, axis=1)


def evaluate_holomorphic(
    descriptor: BasisDescriptor, coefficients: NDArray[np.complex128], z: ComplexArray
) -> ComplexArray:
    """Evaluate sum_m c_m u_m(z) (chunked)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.size, dtype=complex)
    for start in range(0, z.size, CHUNK):
        out[start : start + CHUNK] = terms(descriptor, z[start : start + CHUNK]) @ coefficients
    return out
