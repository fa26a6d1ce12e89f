"""Closed forms on balls and polydisks of C^n.

Only the center of each domain is supported for the indicatrix, where the
pluricomplex Green's function is explicit.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from conformal_rigidity.models.cn import Ball, CnBoundsRecord, CnDomainSpec, Polydisk
from conformal_rigidity.models.errors import DomainMembershipError, UnsupportedConfigurationError

logger = logging.getLogger(__name__)

EQUALITY_REL_TOL = 1e-10


def _offset(n: int, z: Sequence[complex] | None) -> np.ndarray:
    if z is None:
        return np.zeros(n, dtype=complex)
    offset = np.asarray(z, dtype=complex)
    if offset.shape != (n,):
        raise UnsupportedConfigurationError(
            "point must have one coordinate per dimension", {"n": n, "given": int(offset.size)}
        )
    return offset


def _center(spec: CnDomainSpec) -> np.ndarray:
    return _offset(spec.n, spec.center)


def ball_bergman(n: int, radius: float, z: Sequence[complex] | None = None) -> float:
    """Bergman kernel of B^n(0, r) on the diagonal.

    K(z) = n! r^2 / (pi^n (r^2 - |z|^2)^(n+1)), z relative to the center.

    Raises:
        DomainMembershipError: If |z| >= r.
    """
    offset = _offset(n, z)
    norm_sq = float(np.sum(np.abs(offset) ** 2))
    if norm_sq >= radius**2:
        raise DomainMembershipError(
            "point lies outside the ball", point=complex(math.sqrt(norm_sq)), details={"n": n}
        )
    return math.factorial(n) * radius**2 / (math.pi**n * (radius**2 - norm_sq) ** (n + 1))


def polydisk_bergman(radii: Sequence[float], z: Sequence[complex] | None = None) -> float:
    """Product of the disk kernels r_i^2 / (pi (r_i^2 - |z_i|^2)^2).

    Raises:
        DomainMembershipError: If some |z_i| >= r_i.
    """
    offset = _offset(len(radii), z)
    value = 1.0
    for r, w in zip(radii, offset, strict=True):
        gap = r * r - abs(w) ** 2
        if gap <= 0.0:
            raise DomainMembershipError("point lies outside the polydisk", point=complex(w))
        value *= r * r / (math.pi * gap * gap)
    return value


def bergman_at(spec: CnDomainSpec, z: Sequence[complex] | None = None) -> float:
    """Bergman kernel of a ball or polydisk at an absolute point (center when None)."""
    relative = np.zeros(spec.n, dtype=complex) if z is None else _offset(spec.n, z) - _center(spec)
    if isinstance(spec, Ball):
        return ball_bergman(spec.n, spec.radius, relative)
    return polydisk_bergman(spec.radii, relative)


def _require_center(spec: CnDomainSpec, z: Sequence[complex] | None) -> None:
    if z is None:
        return
    if not np.allclose(np.asarray(z, dtype=complex), _center(spec), rtol=0.0, atol=1e-14):
        raise UnsupportedConfigurationError(
            "closed forms exist only at the center", {"kind": spec.kind}
        )


def boundary_distance(spec: CnDomainSpec) -> float:
    """delta at the center: the radius for balls, the smallest radius for polydisks."""
    if isinstance(spec, Ball):
        return spec.radius
    return min(spec.radii)


def azukawa_volume(spec: CnDomainSpec, z: Sequence[complex] | None = None) -> float:
    """Euclidean volume of the Azukawa indicatrix at the center.

    The indicatrix of B^n(z, r) at z is B^n(0, r); that of a polydisk at its
    center is the polydisk of the same radii.

    Raises:
        UnsupportedConfigurationError: If z is not the center.
    """
    _require_center(spec, z)
    if isinstance(spec, Ball):
        return math.pi**spec.n * spec.radius ** (2 * spec.n) / math.factorial(spec.n)
    return math.pi**spec.n * math.prod(r * r for r in spec.radii)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= EQUALITY_REL_TOL * max(abs(a), abs(b))


def delta_bounds_check(spec: CnDomainSpec, z: Sequence[complex] | None = None) -> CnBoundsRecord:
    """Evaluate K <= n!/(pi^n delta^2n) and v(I^A) >= (pi^n/n!) delta^2n at the center.

    Both hold with equality exactly for balls centered at the point.
    """
    _require_center(spec, z)
    if isinstance(spec, Polydisk):
        kernel = polydisk_bergman(spec.radii)
    else:
        kernel = ball_bergman(spec.n, spec.radius)
    n = spec.n
    delta = boundary_distance(spec)
    bound_b = math.factorial(n) / (math.pi**n * delta ** (2 * n))
    volume = azukawa_volume(spec)
    bound_a = math.pi**n * delta ** (2 * n) / math.factorial(n)
    record = CnBoundsRecord(
        domain=spec,
        n=n,
        kernel=kernel,
        delta=delta,
        bound_b=bound_b,
        azukawa_volume=volume,
        bound_a=bound_a,
        kernel_equality=_close(kernel, bound_b),
        volume_equality=_close(volume, bound_a),
    )
    logger.info(
        "Checked C^n bounds",
        extra={"kind": spec.kind, "n": n, "kernel_equality": record.kernel_equality},
    )
    return record
