"""Command-line entry point: equilibria, simulate, discrete, sweep and verify."""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from duopoly.config import settings
from duopoly.equilibria.critical import analyze_equilibria, conjectural_equilibrium, e3_admissible, jacobian_at
from duopoly.errors import ConfigError, DuopolyError, IntegrationError, UnstableAnchor
from duopoly.integrator.absorbing import AbsorbingRect, entry_time
from duopoly.integrator.runge_kutta import integrate
from duopoly.liapunov.rionero import build_bundle
from duopoly.model.core import State, iterate_map
from duopoly.reports import (
    BundleOut,
    CertificationReport,
    EquilibriaReportOut,
    EquilibriumOut,
    EventsOut,
    RunHeader,
    SweepOut,
    TrajectoryOut,
    csv_text,
    dump_json,
    emit,
    events_path,
    params_header,
)
from duopoly.runconfig import RunConfig, load_run_config
from duopoly.sweep import COLUMNS as SWEEP_COLUMNS, run_sweep
from duopoly.verifier.certification import run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

console = Console(stderr=True)

_STATUS_STYLE = {"pass": "green", "fail": "red", "uncertified": "yellow"}


def setup_logging(level: str):
    """Route all logging through rich on stderr; stdout carries CSV/JSON only."""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _header(command: str, config: RunConfig, with_params: bool = True) -> RunHeader:
    return RunHeader(
        command=command,
        config_sha256=config.config_sha256,
        seed=config.seed,
        params=params_header(config.params) if with_params else {},
    )


def _format(args: argparse.Namespace, default: str, allowed=("csv", "json")) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise ConfigError(f"{args.command} writes {' or '.join(allowed)} only", key="--format")
    return fmt


def cmd_equilibria(config: RunConfig, args: argparse.Namespace) -> int:
    _format(args, "json", allowed=("json",))
    p = config.params
    reports = analyze_equilibria(p)
    bundle = None
    if e3_admissible(p):
        try:
            bundle = BundleOut.from_bundle(build_bundle(jacobian_at(p, conjectural_equilibrium(p)), p))
        except UnstableAnchor as e:
            logger.info(f"No Liapunov bundle: {e}")
    report = EquilibriaReportOut(
        header=_header("equilibria", config),
        equilibria=[EquilibriumOut.from_report(r) for r in reports],
        bundle=bundle,
    )
    for r in reports:
        where = "undefined" if r.point is None else f"({float(r.point.u):.6g}, {float(r.point.v):.6g})"
        label = "-" if r.classification is None else r.classification.value
        logger.info(f"{r.kind.value} {where}: {label}{'' if r.admissible else ' (inadmissible)'}")
    emit(dump_json(report), args.out, sys.stdout)
    return EXIT_OK


def _simulation_events(config: RunConfig, traj) -> List[Dict]:
    p = config.params
    events = []
    entered = entry_time(traj, AbsorbingRect.from_params(p))
    events.append({"event": "entered_absorbing_set", "t": entered})
    if e3_admissible(p):
        e3 = conjectural_equilibrium(p)
        final = traj.final_state
        distance = ((final.u - float(e3.u)) ** 2 + (final.v - float(e3.v)) ** 2) ** 0.5
        events.append({"event": "final_distance_to_E3", "t": float(traj.times[-1]), "value": distance})
    return events


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> int:
    fmt = _format(args, "csv")
    opts = config.simulate
    traj = integrate(config.params, State(opts.u0, opts.v0), opts.t_end, dt=opts.dt, method=opts.method)
    traj.events.extend(_simulation_events(config, traj))
    header = _header("simulate", config)
    rows = [[t, u, v] for t, (u, v) in zip(traj.times.tolist(), traj.states.tolist())]
    logger.info(f"Integrated {len(traj)} samples with {traj.method}; final state {traj.final_state}")

    if fmt == "json":
        emit(dump_json(TrajectoryOut(header=header, columns=["t", "u", "v"], rows=rows, events=traj.events)),
             args.out, sys.stdout)
        return EXIT_OK
    emit(csv_text(["t", "u", "v"], rows), args.out, sys.stdout)
    if args.out is not None:
        sidecar = EventsOut(header=header, method=traj.method, dt=traj.dt, samples=len(traj), events=traj.events)
        emit(dump_json(sidecar), events_path(args.out), sys.stdout)
    return EXIT_OK


def cmd_discrete(config: RunConfig, args: argparse.Namespace) -> int:
    fmt = _format(args, "csv")
    opts = config.discrete
    orbit = iterate_map(config.params, State(opts.x0, opts.y0), opts.steps)
    rows = [[k, float(s.u), float(s.v)] for k, s in enumerate(orbit)]
    if fmt == "json":
        emit(dump_json(TrajectoryOut(header=_header("discrete", config), columns=["t", "x", "y"], rows=rows)),
             args.out, sys.stdout)
    else:
        emit(csv_text(["t", "x", "y"], rows), args.out, sys.stdout)
    return EXIT_OK


def cmd_sweep(config: RunConfig, args: argparse.Namespace) -> int:
    fmt = _format(args, "csv")
    rows = run_sweep(config, settings.sweep_cap)
    if fmt == "json":
        out = SweepOut(header=_header("sweep", config, with_params=False), columns=SWEEP_COLUMNS, rows=rows)
        emit(dump_json(out), args.out, sys.stdout)
    else:
        emit(csv_text(SWEEP_COLUMNS, rows), args.out, sys.stdout)
    return EXIT_OK


def _summary_table(report: CertificationReport) -> Table:
    table = Table(title="Certification suite", box=box.SIMPLE)
    table.add_column("Check", style="cyan")
    table.add_column("Status")
    table.add_column("Tolerance", style="dim")
    table.add_column("Measured", style="dim")
    for check in report.checks:
        style = _STATUS_STYLE[check.status]
        measured = ", ".join(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}" for k, v in check.measured.items())
        tol = "-" if check.tolerance is None else f"{check.tolerance:g}"
        table.add_row(check.name, f"[{style}]{check.status}[/{style}]", tol, measured or check.detail)
    return table


def cmd_verify(config: RunConfig, args: argparse.Namespace) -> int:
    _format(args, "json", allowed=("json",))
    checks = run_suite(config.params, config.verify, config.seed)
    passed = all(c.status != "fail" for c in checks)
    report = CertificationReport(header=_header("verify", config), passed=passed, checks=checks)
    emit(dump_json(report), args.out, sys.stdout)
    console.print(_summary_table(report))
    if not passed:
        failed = [c.name for c in checks if c.status == "fail"]
        logger.warning(f"Failed checks: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "equilibria": cmd_equilibria,
    "simulate": cmd_simulate,
    "discrete": cmd_discrete,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Flat key = value run configuration file")
    common.add_argument("--seed", type=int, help="Random seed (overrides the config)")
    common.add_argument("--out", type=Path, help="Output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], help="Output format")
    common.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="Override a config key; may be repeated",
    )
    common.add_argument("--log-level", default=None, help=f"Logging level (default: {settings.log_level})")

    parser = argparse.ArgumentParser(
        prog="duopoly",
        description="Stability analysis and simulation of the conjectural variation duopoly",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("equilibria", parents=[common], help="Critical points, Jacobians and Liapunov constants")
    sub.add_parser("simulate", parents=[common], help="Integrate the continuous system")
    sub.add_parser("discrete", parents=[common], help="Iterate the bounded-rationality map")
    sub.add_parser("sweep", parents=[common], help="Evaluate a parameter grid")
    sub.add_parser("verify", parents=[common], help="Run the certification suite")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level or settings.log_level)

    try:
        config = load_run_config(args.config, args.overrides, args.seed)
        return COMMANDS[args.command](config, args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE
    except IntegrationError as e:
        logger.error(f"Integration failed: {e}")
        return EXIT_CHECK_FAILED
    except (DuopolyError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE
