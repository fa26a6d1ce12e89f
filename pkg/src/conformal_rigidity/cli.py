"""Command-line interface.

Subcommands: ``green``, ``kernel``, ``sweep``, ``chain``, ``cn`` and ``corpus``.
Reports go to standard output (or ``--out``); logs and diagnostics go to
standard error.

Exit codes:
    0  success
    1  usage, configuration, geometry or solver errors; missing files
    2  solver-accuracy failures: chain ordering violations, non-monotone
       sweeps, failed acceptance criteria
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

from pydantic import TypeAdapter, ValidationError

from conformal_rigidity import __version__
from conformal_rigidity.config.settings import RunConfig, get_run_config
from conformal_rigidity.geometry.specfile import load_domain
from conformal_rigidity.models.cn import Ball, Polydisk
from conformal_rigidity.models.errors import ChainOrderingError, ConformalRigidityError
from conformal_rigidity.models.results import GreenReport, StabilityPoint
from conformal_rigidity.observability.logging import configure_logging
from conformal_rigidity.observability.metrics import metrics
from conformal_rigidity.observability.tracing import run_context
from conformal_rigidity.services.chain import compute_chain, require_ordered, rigidity_probe
from conformal_rigidity.services.cndim import delta_bounds_check
from conformal_rigidity.services.corpus import run_corpus
from conformal_rigidity.services.green import delta_capacity_check, log_capacity, solve_green
from conformal_rigidity.services.kernels import (
    analytic_capacity,
    bergman_kernel,
    higher_bergman,
    szego_kernel,
    szego_stability_sweep,
)
from conformal_rigidity.services.reporting import (
    chain_csv,
    chain_svg,
    stability_csv,
    sweep_csv,
    sweep_svg,
    to_json,
)
from conformal_rigidity.services.sublevel import bz_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ACCURACY = 2

_stability_adapter: TypeAdapter[list[StabilityPoint]] = TypeAdapter(list[StabilityPoint])


class UsageError(Exception):
    """Raised instead of exiting when the command line cannot be parsed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _point(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from e


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("run options")
    group.add_argument("--out", type=Path, help="Write the report here instead of stdout")
    group.add_argument("--basis", type=int, help="Interior basis size")
    group.add_argument("--nodes", type=int, help="Quadrature nodes per boundary component")
    group.add_argument("--seed", type=int, help="Random seed for probe points")
    group.add_argument("--workers", type=int, help="Thread pool size")
    group.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    group.add_argument("--log-format", choices=["text", "json"])
    group.add_argument("--metrics-file", type=Path, help="Write Prometheus metrics at exit")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every subcommand."""
    parser = _Parser(
        prog="conformal-rigidity",
        description="Conformal invariants, inequality chains and rigidity checks.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common()]

    green = sub.add_parser("green", parents=common, help="Green's function and c_beta")
    green.add_argument("--domain", type=Path, required=True)
    green.add_argument("--pole", type=_point, required=True, metavar="RE,IM")
    green.add_argument("--tol", type=float, help="Boundary residual tolerance")

    kernel = sub.add_parser("kernel", parents=common, help="Bergman and Szego kernels")
    kernel.add_argument("--domain", type=Path, required=True)
    kernel.add_argument("--point", type=_point, required=True, metavar="RE,IM")
    kernel.add_argument(
        "--kind",
        choices=["bergman", "szego", "higher", "capacity", "stability"],
        default="bergman",
    )
    kernel.add_argument("--order", type=int, default=1, help="Derivative order for --kind higher")
    kernel.add_argument(
        "--radii", type=_floats, help="Decreasing rounding radii for --kind stability"
    )
    kernel.add_argument("--format", choices=["json", "csv"], default="json")

    sweep = sub.add_parser("sweep", parents=common, help="Sublevel volume sweep f(t)")
    sweep.add_argument("--domain", type=Path, required=True)
    sweep.add_argument("--pole", type=_point, required=True, metavar="RE,IM")
    sweep.add_argument("--t-min", type=float)
    sweep.add_argument("--t-max", type=float)
    sweep.add_argument("--points", type=int)
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--svg", type=Path, help="Also write a line chart of f(t)")

    chain = sub.add_parser("chain", parents=common, help="Inequality chain and verdicts")
    chain.add_argument("--domain", type=Path, required=True)
    chain.add_argument("--point", type=_point, required=True, metavar="RE,IM")
    chain.add_argument("--tol", type=float, help="Relative equality tolerance")
    chain.add_argument("--sweep", action="store_true", help="Attach a sublevel sweep")
    chain.add_argument("--format", choices=["json", "csv"], default="json")
    chain.add_argument("--svg", type=Path, help="Also write a bar chart of the entries")
    chain.add_argument("--probe", type=Path, help="Also write the rigidity probe report")

    cn = sub.add_parser("cn", parents=common, help="Closed-form C^n bounds at the center")
    cn.add_argument("--shape", choices=["ball", "polydisk"], required=True)
    cn.add_argument("--dim", type=int)
    cn.add_argument("--radii", type=_floats, required=True)
    cn.add_argument("--check", action="store_true", help="Exit 2 unless both bounds hold")

    corpus = sub.add_parser("corpus", parents=common, help="Run the acceptance corpus")
    corpus.add_argument("--corpus-dir", type=Path)
    corpus.add_argument("--equality-tol", type=float)
    corpus.add_argument("--reports", type=Path, help="Directory for per-point chain reports")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    tol = getattr(args, "tol", None)
    return get_run_config().with_overrides(
        quadrature={"nodes_per_component": args.nodes},
        solver={
            "basis_size": args.basis,
            "residual_tol": tol if args.command == "green" else None,
        },
        sweep={
            "t_min": getattr(args, "t_min", None),
            "t_max": getattr(args, "t_max", None),
            "points": getattr(args, "points", None),
        },
        chain={
            "equality_rel_tol": tol if args.command == "chain" else getattr(
                args, "equality_tol", None
            ),
            "include_sweep": True if getattr(args, "sweep", False) is True else None,
        },
        output={
            "seed": args.seed,
            "workers": args.workers,
            "corpus_dir": getattr(args, "corpus_dir", None),
        },
        observability={
            "log_level": args.log_level,
            "log_format": args.log_format,
            "metrics_textfile": args.metrics_file,
        },
    )


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def _cmd_green(args: argparse.Namespace, cfg: RunConfig) -> int:
    spec, _ = load_domain(args.domain)
    model = solve_green(spec, args.pole, config=cfg)
    report = GreenReport(
        model=model,
        c_beta=log_capacity(model),
        delta_capacity=delta_capacity_check(spec, model, cfg),
    )
    _emit(to_json(report), args.out)
    return EXIT_OK


def _cmd_kernel(args: argparse.Namespace, cfg: RunConfig) -> int:
    spec, _ = load_domain(args.domain)
    if args.kind == "stability":
        if not args.radii:
            raise UsageError("--kind stability requires --radii")
        points = szego_stability_sweep(spec, args.radii, args.point, config=cfg)
        if args.format == "csv":
            _emit(stability_csv(points), args.out)
        else:
            _emit(_stability_adapter.dump_json(points, indent=2).decode() + "\n", args.out)
        return EXIT_OK
    if args.format == "csv":
        raise UsageError("--format csv is only available for --kind stability")
    if args.kind == "capacity":
        _emit(to_json(analytic_capacity(spec, args.point, config=cfg)), args.out)
        return EXIT_OK
    if args.kind == "higher":
        result = higher_bergman(spec, args.point, args.order, config=cfg)
    elif args.kind == "szego":
        result = szego_kernel(spec, args.point, config=cfg)
    else:
        result = bergman_kernel(spec, args.point, config=cfg)
    _emit(to_json(result), args.out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, cfg: RunConfig) -> int:
    spec, _ = load_domain(args.domain)
    result = bz_sweep(solve_green(spec, args.pole, config=cfg), config=cfg)
    _emit(sweep_csv(result) if args.format == "csv" else to_json(result), args.out)
    if args.svg is not None:
        args.svg.write_text(sweep_svg(result, cfg.output.svg_width), encoding="utf-8")
    if not result.monotone:
        print(f"error[non_monotone]: f increases at t = {result.violations}", file=sys.stderr)
        return EXIT_ACCURACY
    return EXIT_OK


def _cmd_chain(args: argparse.Namespace, cfg: RunConfig) -> int:
    spec, name = load_domain(args.domain)
    report = compute_chain(spec, args.point, cfg, name=name)
    _emit(chain_csv(report) if args.format == "csv" else to_json(report), args.out)
    if args.svg is not None:
        args.svg.write_text(chain_svg(report, cfg.output.svg_width), encoding="utf-8")
    if args.probe is not None:
        probe = rigidity_probe(spec, args.point, report.verdicts, cfg)
        args.probe.write_text(to_json(probe), encoding="utf-8")
    require_ordered(report)
    return EXIT_OK


def _cmd_cn(args: argparse.Namespace, cfg: RunConfig) -> int:
    radii = args.radii
    if args.shape == "ball":
        if len(radii) != 1:
            raise UsageError("a ball takes exactly one radius")
        spec: Ball | Polydisk = Ball(n=args.dim or 1, radius=radii[0])
    else:
        if args.dim is not None and args.dim != len(radii):
            raise UsageError("--dim must match the number of polydisk radii")
        spec = Polydisk(radii=tuple(radii))
    record = delta_bounds_check(spec)
    _emit(to_json(record), args.out)
    if args.check and not record.bounds_hold:
        print("error[bounds]: a closed-form bound failed", file=sys.stderr)
        return EXIT_ACCURACY
    return EXIT_OK


def _cmd_corpus(args: argparse.Namespace, cfg: RunConfig) -> int:
    run = run_corpus(cfg)
    _emit(to_json(run.summary), args.out)
    if args.reports is not None:
        args.reports.mkdir(parents=True, exist_ok=True)
        for report in run.reports:
            name = (report.name or "report").replace("@", "-")
            (args.reports / f"{name}.json").write_text(to_json(report), encoding="utf-8")
    for c in run.summary.criteria:
        status = "PASS" if c.passed else "FAIL"
        print(f"{c.criterion:>4} {status} {c.description}: {c.observed}", file=sys.stderr)
    return EXIT_OK if run.summary.passed else EXIT_ACCURACY


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "green": _cmd_green,
    "kernel": _cmd_kernel,
    "sweep": _cmd_sweep,
    "chain": _cmd_chain,
    "cn": _cmd_cn,
    "corpus": _cmd_corpus,
}


def _fail(code: str, message: str) -> int:
    print(f"error[{code}]: {message}", file=sys.stderr)
    return EXIT_ERROR


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one subcommand and map failures to exit codes.

    Args:
        argv: Arguments without the program name (``sys.argv[1:]`` when None).

    Returns:
        int: Process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _fail("usage", str(e))
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    try:
        cfg = _config(args)
    except ValidationError as e:
        return _fail("configuration_invalid", str(e).splitlines()[0])
    configure_logging(cfg.observability.log_level, cfg.observability.log_format)

    with run_context():
        try:
            code = COMMANDS[args.command](args, cfg)
        except ChainOrderingError as e:
            print(f"error[{e.code}]: {e.message}", file=sys.stderr)
            for violation in e.violations:
                print(f"  {violation}", file=sys.stderr)
            code = EXIT_ACCURACY
        except ConformalRigidityError as e:
            code = _fail(e.code, e.message)
        except UsageError as e:
            code = _fail("usage", str(e))
        except ValidationError as e:
            code = _fail("invalid_input", str(e).splitlines()[0])
        except OSError as e:
            code = _fail("io", str(e))
        finally:
            if cfg.observability.metrics_textfile is not None:
                metrics.write_textfile(cfg.observability.metrics_textfile)
    logger.debug("Command finished", extra={"command": args.command, "exit_code": code})
    return code
