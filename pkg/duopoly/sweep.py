"""Parameter grid sweeps over the model constants."""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Dict, Iterator, List, Optional

from duopoly.equilibria.critical import EquilibriumKind, analyze_equilibria, jacobian_at
from duopoly.errors import DuopolyError, GridTooLarge
from duopoly.integrator.absorbing import AbsorbingRect, entry_time
from duopoly.integrator.runge_kutta import integrate
from duopoly.liapunov.rionero import build_bundle
from duopoly.model.core import PARAM_KEYS, ModelParams, State
from duopoly.reports import Scalar
from duopoly.runconfig import RunConfig

logger = logging.getLogger(__name__)

COLUMNS = list(PARAM_KEYS) + [
    "e3_admissible",
    "e3_degenerate",
    "class_E0",
    "class_E1",
    "class_E2",
    "class_E3",
    "radius_sq",
    "global_ok",
    "entry_time",
]


@dataclass(frozen=True)
class EntryRun:
    """Trajectory used to measure the entry time into S at each grid point."""

    u0: float
    v0: float
    t_end: float
    dt: float


def grid_points(base: Dict[str, float], ranges: Dict[str, List[float]], cap: int) -> Iterator[Dict[str, float]]:
    """Row-major grid: the earliest swept parameter in PARAM_KEYS order varies slowest."""
    swept = [k for k in PARAM_KEYS if k in ranges]
    size = 1
    for k in swept:
        size *= len(ranges[k])
    if size > cap:
        raise GridTooLarge(f"sweep grid has {size} points, cap is {cap}")
    for combo in itertools.product(*(ranges[k] for k in swept)):
        point = dict(base)
        point.update(zip(swept, combo))
        yield {k: point[k] for k in PARAM_KEYS}


def evaluate_point(values: Dict[str, float], entry_run: EntryRun) -> List[Scalar]:
    """One CSV row for a grid point; pure, so it may run in any worker."""
    p = ModelParams.from_mapping(values)
    reports = {r.kind: r for r in analyze_equilibria(p)}
    e3 = reports[EquilibriumKind.CONJECTURAL]

    radius_sq: Optional[float] = None
    global_ok: Optional[bool] = None
    if e3.admissible and not e3.degenerate:
        try:
            bundle = build_bundle(jacobian_at(p, e3.point), p)
            radius_sq, global_ok = float(bundle.radius_sq), bundle.global_ok
        except DuopolyError as e:
            logger.debug(f"No bundle at {values}: {e}")

    try:
        traj = integrate(p, State(entry_run.u0, entry_run.v0), entry_run.t_end, dt=entry_run.dt, method="rk4")
        entered = entry_time(traj, AbsorbingRect.from_params(p))
    except DuopolyError as e:
        logger.warning(f"Entry run failed at {values}: {e}")
        entered = None

    def label(kind: EquilibriumKind) -> Optional[str]:
        cls = reports[kind].classification
        return None if cls is None else cls.value

    return [values[k] for k in PARAM_KEYS] + [
        e3.admissible,
        e3.degenerate,
        label(EquilibriumKind.ORIGIN),
        label(EquilibriumKind.BOUNDARY_Y),
        label(EquilibriumKind.BOUNDARY_X),
        label(EquilibriumKind.CONJECTURAL),
        radius_sq,
        global_ok,
        entered,
    ]


def run_sweep(config: RunConfig, cap: int, workers: Optional[int] = None) -> List[List[Scalar]]:
    """Evaluate every grid point; rows come back in grid order for any worker count."""
    options = config.sweep
    workers = options.workers if workers is None else workers
    ranges = {k: r.values() for k, r in options.ranges.items()}
    points = list(grid_points(config.sweep_base(), ranges, cap))
    entry_run = EntryRun(options.u0, options.v0, options.t_end, options.dt)
    task = partial(evaluate_point, entry_run=entry_run)
    logger.info(f"Sweeping {len(points)} grid points with {workers} worker(s)")
    if workers == 1:
        return [task(values) for values in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, points, chunksize=max(1, len(points) // (4 * workers))))
