"""Time integration of the continuous duopoly system."""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from duopoly.config import settings
from duopoly.errors import OrthantViolation, StepSizeUnderflow
from duopoly.model.core import ModelParams, State, field_array

logger = logging.getLogger(__name__)

METHODS = ("rk4", "rk45")


@dataclass
class Trajectory:
    """Time-stamped states with integration metadata.

    ``states`` has shape (len(times), 2) with columns u and v.
    """

    times: np.ndarray
    states: np.ndarray
    method: str
    dt: float
    events: List[Dict] = field(default_factory=list)

    def __post_init__(self):
        if self.states.shape != (len(self.times), 2):
            raise ValueError(f"states shape {self.states.shape} does not match {len(self.times)} times")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def u(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def final_state(self) -> State:
        return State(float(self.states[-1, 0]), float(self.states[-1, 1]))

    def state_at(self, index: int) -> State:
        return State(float(self.states[index, 0]), float(self.states[index, 1]))


def _step_count(t_end: float, dt: float) -> int:
    # tolerate t_end/dt landing a hair above an integer
    return max(1, int(math.ceil(t_end / dt * (1.0 - 1e-12))))


def _check_orthant(t: float, y: np.ndarray):
    if np.any(y < -settings.orthant_abort):
        raise OrthantViolation(t, y.tolist())


def rk4_step(p: ModelParams, y: np.ndarray, h: float) -> np.ndarray:
    """
    One classical RK4 step of the duopoly field.

    Args:
        p: Model parameters (floats)
        y: State of shape (2,) or a batch of shape (2, N)
        h: Step size; negative steps integrate backwards

    Returns:
        The state after the step, same shape as ``y``
    """
    k1 = field_array(p, y)
    k2 = field_array(p, y + 0.5 * h * k1)
    k3 = field_array(p, y + 0.5 * h * k2)
    k4 = field_array(p, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def stream_rk4(p: ModelParams, y0: np.ndarray, t_end: float, dt: float) -> Iterator[Tuple[float, np.ndarray]]:
    """Yield (t, y) for fixed-step RK4, starting with (0, y0).

    ``y0`` has shape (2,) for one trajectory or (2, N) for N trajectories at once.
    The step is t_end / ceil(t_end / dt) so the last sample lands on t_end.
    """
    p = p.as_float()
    n = _step_count(t_end, dt)
    times = np.linspace(0.0, t_end, n + 1)
    y = np.array(y0, dtype=float)
    yield 0.0, y
    for i in range(n):
        h = times[i + 1] - times[i]
        y = rk4_step(p, y, h)
        _check_orthant(times[i + 1], y)
        yield float(times[i + 1]), y


def _validate(s0: State, t_end: float, dt: float, method: str):
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if method not in METHODS:
        raise ValueError(f"Unknown method '{method}', expected one of {METHODS}")
    if not s0.in_first_orthant():
        raise ValueError(f"Initial state {s0} is outside the first orthant")


def integrate(
    p: ModelParams,
    s0: State,
    t_end: float,
    dt: float = None,
    method: str = None,
    rtol: float = None,
    atol: float = None,
) -> Trajectory:
    """
    Integrate from s0 up to t_end; samples are at most dt apart.

    "rk4" samples the uniform grid of ``stream_rk4``. "rk45" runs ``solve_ivp`` with
    ``max_step=dt`` and returns the solver's accepted steps as they are, so that grid
    is generally not uniform.

    Args:
        p: Model parameters
        s0: Start in the closed first quadrant
        t_end: Horizon, > 0
        dt: Step for rk4, step cap for rk45 (default settings.dt)
        method: "rk4" or "rk45" (default settings.method)
        rtol: rk45 relative tolerance (default settings.rk45_rtol)
        atol: rk45 absolute tolerance (default settings.rk45_atol)

    Returns:
        Trajectory with the samples and the method used
    """
    dt = settings.dt if dt is None else dt
    method = settings.method if method is None else method
    _validate(s0, t_end, dt, method)

    if method == "rk4":
        times, states = [], []
        for t, y in stream_rk4(p, s0.as_array(), t_end, dt):
            times.append(t)
            states.append(y)
        return Trajectory(np.array(times), np.array(states), "rk4", dt)

    rtol = settings.rk45_rtol if rtol is None else rtol
    atol = settings.rk45_atol if atol is None else atol
    pf = p.as_float()
    sol = solve_ivp(
        lambda t, y: field_array(pf, y),
        (0.0, t_end),
        s0.as_array(),
        method="RK45",
        rtol=rtol,
        atol=atol,
        max_step=dt,
    )
    if sol.status == -1:
        logger.error(f"RK45 failed: {sol.message}")
        raise StepSizeUnderflow(sol.message, float(sol.t[-1]))
    states = sol.y.T
    bad = np.nonzero(np.any(states < -settings.orthant_abort, axis=1))[0]
    if bad.size:
        raise OrthantViolation(float(sol.t[bad[0]]), states[bad[0]].tolist())
    return Trajectory(sol.t, states, "rk45", dt)


def convergence_order(p: ModelParams, s0: State, t_end: float, dts: Sequence[float]) -> float:
    """Empirical RK4 order: slope of log(final-state error) against log(dt).

    The reference run uses a step 16 times finer than the smallest dt.
    """
    reference = integrate(p, s0, t_end, dt=min(dts) / 16.0, method="rk4").final_state.as_array()
    errors = []
    for dt in dts:
        final = integrate(p, s0, t_end, dt=dt, method="rk4").final_state.as_array()
        errors.append(np.linalg.norm(final - reference))
    slope, _ = np.polyfit(np.log(dts), np.log(errors), 1)
    logger.info(f"RK4 convergence slope {slope:.3f} over dt={list(dts)}")
    return float(slope)
