"""Sublevel sets {G < t} of a solved Green's function.

Volumes come from a quadtree over the disk that must contain the sublevel set:
cells whose corners all lie below the level count in full, mixed cells are
refined and estimated by the linear interpolant on two triangles, and the
depth sequence is Richardson-extrapolated. Level curves for the co-area flux
are traced with contourpy, projected back onto {G = t} by Newton steps and
resampled with a periodic spline.
"""

import contextvars
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from contourpy import LineType, contour_generator
from scipy.interpolate import splev, splprep

from conformal_rigidity.config.settings import RunConfig, get_run_config
from conformal_rigidity.geometry.measures import planar_domain
from conformal_rigidity.geometry.planar import PlanarDomain
from conformal_rigidity.geometry.quadrature import ComplexArray, FloatArray
from conformal_rigidity.models.errors import ArgumentError, GeometryError
from conformal_rigidity.models.results import GreenModel, SublevelRecord, SublevelSweep
from conformal_rigidity.observability.tracing import trace_sync
from conformal_rigidity.services.green import green_gradient, green_value, log_capacity

logger = logging.getLogger(__name__)

CLIP = 40.0
LevelFunction = Callable[[ComplexArray], FloatArray]


def _require_negative(t: float) -> None:
    if not t < 0.0:
        raise ArgumentError("level t must be negative", {"t": t})


def _level_function(model: GreenModel, domain: PlanarDomain, t: float) -> LevelFunction:
    """G - t inside Omega, -t outside, clipped below at -CLIP."""

    def level(points: ComplexArray) -> FloatArray:
        values = green_value(model, points)
        values = np.where(np.isnan(values), 0.0, values)
        candidate = values < 0.0
        if candidate.any():
            inside = np.zeros(points.size, dtype=bool)
            inside[candidate] = domain.contains(points[candidate])
            values = np.where(inside, values, 0.0)
        return np.maximum(values - t, -CLIP)

    return level


def _containing_radius(model: GreenModel, domain: PlanarDomain, t: float) -> float:
    # G >= log(|z - z0| / M) with M the largest boundary distance from z0
    return 1.01 * math.exp(t) * domain.max_distance_from(model.pole)


def _triangle_fraction(values: FloatArray) -> FloatArray:
    """Fraction of a triangle where the linear interpolant is negative."""
    f = np.sort(values, axis=1)
    negative = (values < 0.0).sum(axis=1)
    a, b, c = f[:, 0], f[:, 1], f[:, 2]
    fraction = np.where(negative == 3, 1.0, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        one = a * a / ((a - b) * (a - c))
        two = 1.0 - c * c / ((c - a) * (c - b))
    fraction = np.where(negative == 1, one, fraction)
    return np.where(negative == 2, two, fraction)


def _mixed_area(corners: FloatArray, h: float) -> float:
    lower = _triangle_fraction(corners[:, [0, 1, 2]])
    upper = _triangle_fraction(corners[:, [0, 2, 3]])
    return float(0.5 * h * h * np.sum(lower + upper))


def _refine(
    level: LevelFunction, origins: ComplexArray, corners: FloatArray, h: float
) -> tuple[ComplexArray, FloatArray]:
    half = 0.5 * h
    offsets = (half, h + 1j * half, half + 1j * h, 1j * half, half + 1j * half)
    fresh = level(np.concatenate([origins + o for o in offsets])).reshape(5, -1)
    bottom, right, top, left, center = fresh
    f00, f10, f11, f01 = corners.T
    children = [
        (origins, (f00, bottom, center, left)),
        (origins + half, (bottom, f10, right, center)),
        (origins + half + 1j * half, (center, right, f11, top)),
        (origins + 1j * half, (left, center, top, f01)),
    ]
    new_origins = np.concatenate([o for o, _ in children])
    new_corners = np.concatenate([np.stack(c, axis=1) for _, c in children])
    return new_origins, new_corners


@trace_sync(operation="sublevel_volume")
def sublevel_volume(model: GreenModel, t: float, config: RunConfig | None = None) -> float:
    """Area of {z in Omega: G(z, z0) < t}.

    Args:
        model: Solved Green model.
        t: Negative level.
        config: Run configuration (global configuration when None).

    Returns:
        float: Richardson-extrapolated quadtree area.

    Raises:
        ArgumentError: If t >= 0.
    """
    _require_negative(t)
    cfg = config or get_run_config()
    sweep = cfg.sweep
    domain = planar_domain(model.domain, cfg.quadrature)
    level = _level_function(model, domain, t)

    radius = _containing_radius(model, domain, t)
    n = sweep.base_cells
    h = 2.0 * radius / n
    ticks = np.arange(n + 1) * h - radius
    grid = model.pole + ticks[:, None] + 1j * ticks[None, :]
    values = level(grid.ravel()).reshape(n + 1, n + 1)
    corners = np.stack(
        [values[:-1, :-1], values[1:, :-1], values[1:, 1:], values[:-1, 1:]], axis=-1
    ).reshape(-1, 4)
    origins = grid[:-1, :-1].ravel()

    full = 0.0
    previous: float | None = None
    extrapolated: float | None = None
    for depth in range(sweep.max_depth + 1):
        inside = (corners < 0.0).all(axis=1)
        mixed = ~inside & (corners < 0.0).any(axis=1)
        full += float(inside.sum()) * h * h
        origins, corners = origins[mixed], corners[mixed]
        estimate = full + _mixed_area(corners, h)
        if not corners.size:
            return estimate
        if previous is not None:
            current = estimate + (estimate - previous) / 3.0
            if extrapolated is not None and abs(current - extrapolated) <= (
                sweep.volume_rel_tol * current
            ):
                return current
            extrapolated = current
        previous = estimate
        if depth < sweep.max_depth:
            origins, corners = _refine(level, origins, corners, h)
            h *= 0.5
    logger.warning(
        "Sublevel volume did not reach its tolerance",
        extra={"t": t, "depth": sweep.max_depth, "estimate": extrapolated},
    )
    return extrapolated if extrapolated is not None else previous or 0.0


def _ascending_grid(t_grid: Sequence[float]) -> list[float]:
    grid = [float(t) for t in t_grid]
    if not grid:
        raise ArgumentError("t-grid is empty")
    for t in grid:
        _require_negative(t)
    steps = np.diff(grid)
    if not (np.all(steps > 0.0) or np.all(steps < 0.0)):
        raise ArgumentError("t-grid must be strictly monotone", {"t_grid": grid})
    return sorted(grid)


@trace_sync(operation="bz_sweep")
def bz_sweep(
    model: GreenModel,
    t_grid: Sequence[float] | None = None,
    config: RunConfig | None = None,
) -> SublevelSweep:
    """Evaluate f(t) = pi e^{2t} / v({G < t}) over a grid of levels.

    f is non-increasing; it tends to c_beta(z0)^2 as t -> -inf and to
    pi / v(Omega) as t -> 0-. Records are stored in increasing t.

    Args:
        model: Solved Green model.
        t_grid: Strictly monotone negative levels (configured log grid when None).
        config: Run configuration (global configuration when None).

    Returns:
        SublevelSweep: Records, monotonicity violations and limit diagnostics.

    Raises:
        ArgumentError: If the grid is empty, not monotone or not negative.
    """
    cfg = config or get_run_config()
    sweep = cfg.sweep
    grid = _ascending_grid(cfg.sweep.t_grid() if t_grid is None else t_grid)
    with ThreadPoolExecutor(max_workers=cfg.output.workers) as pool:
        futures = [
            pool.submit(contextvars.copy_context().run, sublevel_volume, model, t, cfg)
            for t in grid
        ]
        volumes = [f.result() for f in futures]
    records = [
        SublevelRecord(t=t, volume=v, f=math.pi * math.exp(2.0 * t) / v)
        for t, v in zip(grid, volumes, strict=True)
    ]
    violations = [
        later.t
        for earlier, later in zip(records[:-1], records[1:], strict=True)
        if later.f > earlier.f * (1.0 + sweep.monotone_rel_tol)
    ]

    last = records[-1]
    limit_zero = last.f
    if len(records) > 1:
        before = records[-2]
        slope = (last.f - before.f) / (last.t - before.t)
        limit_zero = last.f - last.t * slope
    target_zero = math.pi / planar_domain(model.domain, cfg.quadrature).area
    target_inf = log_capacity(model) ** 2
    result = SublevelSweep(
        pole=model.pole,
        records=records,
        monotone=not violations,
        violations=violations,
        limit_zero_raw=last.f,
        limit_zero=limit_zero,
        limit_inf=records[0].f,
        target_zero=target_zero,
        target_inf=target_inf,
        limit_zero_ok=abs(limit_zero - target_zero) <= sweep.limit_zero_rel_tol * target_zero,
        limit_inf_ok=abs(records[0].f - target_inf) <= sweep.limit_inf_rel_tol * target_inf,
    )
    logger.info(
        "Sublevel sweep finished",
        extra={
            "levels": len(records),
            "monotone": result.monotone,
            "limit_zero": limit_zero,
            "limit_inf": result.limit_inf,
        },
    )
    return result


def _project(model: GreenModel, z: ComplexArray, t: float, steps: int) -> ComplexArray:
    for _ in range(steps):
        gradient = green_gradient(model, z)
        z = z - (green_value(model, z) - t) * gradient / np.abs(gradient) ** 2
    return z


def _drop_crowded(z: ComplexArray) -> ComplexArray:
    gaps = np.abs(np.diff(np.append(z, z[0])))
    return z[gaps > 0.1 * np.median(gaps)]


Spline = tuple[FloatArray, list[FloatArray], int]


def _traced_splines(model: GreenModel, t: float, cfg: RunConfig) -> list[Spline]:
    _require_negative(t)
    domain = planar_domain(model.domain, cfg.quadrature)
    level = _level_function(model, domain, t)
    radius = 1.05 * _containing_radius(model, domain, t)
    ticks = np.linspace(-radius, radius, cfg.sweep.contour_grid)
    x = model.pole.real + ticks
    y = model.pole.imag + ticks
    xx, yy = np.meshgrid(x, y)
    values = level((xx + 1j * yy).ravel()).reshape(xx.shape)

    lines = contour_generator(x, y, values, line_type=LineType.Separate).lines(0.0)
    if not lines:
        raise GeometryError("no level curve found", {"t": t})
    splines = []
    for line in lines:
        points = line[:, 0] + 1j * line[:, 1]
        if points.size < 5 or abs(points[0] - points[-1]) > 1e-12 * radius:
            raise GeometryError("level curve is not closed", {"t": t, "points": int(points.size)})
        points = _drop_crowded(_project(model, points[:-1], t, 8))
        # periodic splprep ignores the repeated closing point
        closed = np.append(points, points[0])
        tck, _ = splprep([closed.real, closed.imag], s=0, per=1)
        splines.append(tck)
    return splines


def level_curves(
    model: GreenModel, t: float, config: RunConfig | None = None
) -> list[ComplexArray]:
    """Closed components of {G = t}, resampled at equal spline parameter steps.

    Raises:
        ArgumentError: If t >= 0.
        GeometryError: If no closed level curve can be extracted.
    """
    cfg = config or get_run_config()
    u = np.arange(cfg.sweep.contour_samples) / cfg.sweep.contour_samples
    curves = []
    for tck in _traced_splines(model, t, cfg):
        xs, ys = splev(u, tck)
        curves.append(_project(model, np.asarray(xs) + 1j * np.asarray(ys), t, 3))
    return curves


@trace_sync(operation="coarea_flux")
def coarea_flux(model: GreenModel, t: float, config: RunConfig | None = None) -> float:
    """Line integral of |grad G| over the level set {G = t}; equals 2 pi.

    Args:
        model: Solved Green model.
        t: Negative level.
        config: Run configuration (global configuration when None).

    Returns:
        float: The flux summed over every component of the level set.

    Raises:
        ArgumentError: If t >= 0.
        GeometryError: If contour extraction fails.
    """
    cfg = config or get_run_config()
    u = np.arange(cfg.sweep.contour_samples) / cfg.sweep.contour_samples
    flux = 0.0
    for tck in _traced_splines(model, t, cfg):
        xs, ys = splev(u, tck)
        dx, dy = splev(u, tck, der=1)
        points = np.asarray(xs) + 1j * np.asarray(ys)
        speed = np.hypot(dx, dy)
        flux += float(np.mean(np.abs(green_gradient(model, points)) * speed))
    if abs(flux - 2.0 * math.pi) > cfg.sweep.flux_tol:
        logger.warning("Co-area flux outside tolerance", extra={"t": t, "flux": flux})
    return flux
