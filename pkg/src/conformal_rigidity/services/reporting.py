"""Serialization of reports to CSV, JSON and SVG.

All writers are deterministic: floats are written with 17 significant digits,
JSON comes from the pydantic models, and SVG output uses a fixed hash salt
and no date metadata.
"""

import csv
import io
import math
from collections.abc import Iterable, Sequence

import matplotlib as mpl
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure
from pydantic import BaseModel

from conformal_rigidity.models.results import (
    CHAIN_ORDER,
    ChainReport,
    StabilityPoint,
    SublevelSweep,
)

SWEEP_COLUMNS = ("t", "volume", "f")
STABILITY_COLUMNS = ("radius", "S")
CHAIN_COLUMNS = ("entry", "value")

SVG_RC = {
    "svg.hashsalt": "conformal-rigidity",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.spines.right": False,
    "axes.spines.top": False,
}


def _number(x: float) -> str:
    return f"{x:.17g}"


def _csv(header: Sequence[str], rows: Iterable[Sequence[float | str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else _number(v) for v in row])
    return buffer.getvalue()


def sweep_csv(sweep: SublevelSweep) -> str:
    """CSV with columns ``t,volume,f`` in increasing t."""
    return _csv(SWEEP_COLUMNS, ((r.t, r.volume, r.f) for r in sweep.records))


def stability_csv(points: Sequence[StabilityPoint]) -> str:
    """CSV with columns ``radius,S`` in the order the radii were given."""
    return _csv(STABILITY_COLUMNS, ((p.radius, p.value) for p in points))


def chain_csv(report: ChainReport) -> str:
    """CSV with columns ``entry,value`` in chain order."""
    return _csv(CHAIN_COLUMNS, ((e.value, report.entries[e]) for e in CHAIN_ORDER))


def to_json(model: BaseModel) -> str:
    """Pretty JSON of any report, using field aliases (``schema``)."""
    return model.model_dump_json(indent=2, by_alias=True) + "\n"


def _render(figure: Figure) -> str:
    buffer = io.StringIO()
    with mpl.rc_context(SVG_RC):
        FigureCanvasSVG(figure).print_svg(buffer, metadata={"Date": None})
    return buffer.getvalue()


def _figure(width: float) -> Figure:
    with mpl.rc_context(SVG_RC):
        return Figure(figsize=(width, 0.6 * width), facecolor="w", layout="tight")


def chain_svg(report: ChainReport, width: float = 7.0) -> str:
    """Bar chart of the chain entries, largest first."""
    figure = _figure(width)
    with mpl.rc_context(SVG_RC):
        ax = figure.add_subplot()
        labels = [e.value for e in CHAIN_ORDER]
        values = [report.entries[e] for e in CHAIN_ORDER]
        ax.bar(labels, values, color="0.35")
        ax.set_ylabel("value")
        ax.set_title(report.name or report.domain.kind)
        ax.tick_params(axis="x", labelrotation=30)
    return _render(figure)


def sweep_svg(sweep: SublevelSweep, width: float = 7.0) -> str:
    """Line chart of f(t) with both limit targets drawn as reference lines."""
    figure = _figure(width)
    with mpl.rc_context(SVG_RC):
        ax = figure.add_subplot()
        t = [r.t for r in sweep.records]
        ax.plot(t, [r.f for r in sweep.records], marker=".", color="k", linewidth=0.8)
        ax.axhline(sweep.target_zero, color="0.5", linestyle="--", linewidth=0.6)
        ax.axhline(sweep.target_inf, color="0.5", linestyle=":", linewidth=0.6)
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\pi e^{2t} / v(\{G < t\})$")
        span = max(r.f for r in sweep.records) - min(r.f for r in sweep.records)
        if math.isclose(span, 0.0, abs_tol=1e-12):
            center = sweep.records[0].f
            ax.set_ylim(center * 0.99, center * 1.01)
    return _render(figure)
