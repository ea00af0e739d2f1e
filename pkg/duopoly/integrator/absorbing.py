"""Absorbing rectangle checks: upper envelopes, entry times, positive invariance.

The envelopes come from comparing du/dt <= a u (theta1 - L1 u) and solving the
linear equation for w = 1/u:

    u(t) <= 1 / [w0 exp(-a theta1 t) + (L1 / theta1) (1 - exp(-a theta1 t))]
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from duopoly.config import settings
from duopoly.integrator.runge_kutta import Trajectory, stream_rk4
from duopoly.model.core import ModelParams, State

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbsorbingRect:
    """S = {0 < u <= u_max, 0 < v <= v_max}; only the upper edges attract."""

    u_max: float
    v_max: float

    def __post_init__(self):
        if not (self.u_max > 0 and self.v_max > 0):
            raise ValueError(f"Rectangle bounds must be positive, got ({self.u_max}, {self.v_max})")

    @classmethod
    def from_params(cls, p: ModelParams) -> "AbsorbingRect":
        return cls(float(p.theta1 / p.L1), float(p.theta2 / p.L2))

    def contains(self, s: State, slack: float = 0.0) -> bool:
        return 0 < s.u <= self.u_max + slack and 0 < s.v <= self.v_max + slack


def _envelope(rate: float, ratio: float, x0, t):
    decay = np.exp(-rate * np.asarray(t, dtype=float))
    return 1.0 / (decay / np.asarray(x0, dtype=float) + ratio * (1.0 - decay))


def upper_envelope(p: ModelParams, u0, t):
    """Upper bound for u(t) started from u0 > 0; broadcasts over arrays."""
    if np.any(np.asarray(u0) <= 0):
        raise ValueError("u0 must be positive")
    return _envelope(float(p.a * p.theta1), float(p.L1 / p.theta1), u0, t)


def upper_envelope_v(p: ModelParams, v0, t):
    """Upper bound for v(t) started from v0 > 0; broadcasts over arrays."""
    if np.any(np.asarray(v0) <= 0):
        raise ValueError("v0 must be positive")
    return _envelope(float(p.nu * p.theta2), float(p.L2 / p.theta2), v0, t)


def envelope_limit(p: ModelParams) -> Tuple[float, float]:
    """t -> infinity limits of both envelopes."""
    return float(p.theta1 / p.L1), float(p.theta2 / p.L2)


def envelope_crossing_time(p: ModelParams, x0: float, level: float, component: str = "u") -> Optional[float]:
    """First time the envelope started at x0 drops to ``level``.

    Zero when x0 <= level; None when the level is at or below the limit.
    """
    envelope = upper_envelope if component == "u" else upper_envelope_v
    limit = envelope_limit(p)[0 if component == "u" else 1]
    if x0 <= level:
        return 0.0
    if level <= limit:
        return None
    t_hi = 1.0
    while envelope(p, x0, t_hi) > level:
        t_hi *= 2.0
    return float(brentq(lambda t: float(envelope(p, x0, t)) - level, 0.0, t_hi, xtol=1e-12))


def entry_time(traj: Trajectory, rect: AbsorbingRect, eps: float = None) -> Optional[float]:
    """First sample time after which every sample satisfies the upper bounds (+eps)."""
    eps = settings.entry_eps if eps is None else eps
    inside = (traj.u <= rect.u_max + eps) & (traj.v <= rect.v_max + eps)
    outside = np.nonzero(~inside)[0]
    if outside.size == 0:
        return float(traj.times[0])
    last = outside[-1]
    if last == len(traj) - 1:
        return None
    return float(traj.times[last + 1])


@dataclass
class InvarianceReport:
    samples: int
    t_end: float
    max_excess: float
    tolerance: float
    violations: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def random_interior_points(rect: AbsorbingRect, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` points in (0, u_max] x (0, v_max], shape (count, 2)."""
    unit = 1.0 - rng.random((count, 2))
    return unit * np.array([rect.u_max, rect.v_max])


def check_positive_invariance(
    p: ModelParams,
    rect: AbsorbingRect,
    samples: int,
    t_end: float = 50.0,
    dt: float = None,
    seed: int = None,
    extra_starts: Sequence[State] = (),
) -> InvarianceReport:
    """Integrate from random points of S (plus ``extra_starts``) and record exits."""
    dt = settings.dt if dt is None else dt
    seed = settings.seed if seed is None else seed
    tol = settings.invariance_tol
    rng = np.random.default_rng(seed)
    starts = random_interior_points(rect, samples, rng)
    if extra_starts:
        starts = np.vstack([np.array([[float(s.u), float(s.v)] for s in extra_starts]), starts])

    bounds = np.array([[rect.u_max], [rect.v_max]])
    worst = np.full(starts.shape[0], -np.inf)
    worst_t = np.zeros(starts.shape[0])
    for t, y in stream_rk4(p, starts.T, t_end, dt):
        excess = np.max(y - bounds, axis=0)
        newer = excess > worst
        worst = np.where(newer, excess, worst)
        worst_t = np.where(newer, t, worst_t)

    violations = [
        {"index": int(i), "t": float(worst_t[i]), "excess": float(worst[i]),
         "u0": float(starts[i, 0]), "v0": float(starts[i, 1])}
        for i in np.nonzero(worst > tol)[0]
    ]
    if violations:
        logger.warning(f"{len(violations)} trajectories left S by more than {tol}")
    return InvarianceReport(starts.shape[0], t_end, float(np.max(worst)), tol, violations)


@dataclass
class EnvelopeReport:
    samples: int
    t_end: float
    max_ratio_u: float
    max_ratio_v: float
    slack: float
    violations: int

    @property
    def ok(self) -> bool:
        return self.violations == 0


def check_envelopes(p: ModelParams, starts: np.ndarray, t_end: float, dt: float = None) -> EnvelopeReport:
    """u(t) <= upper_envelope(u0, t) (1 + slack) and likewise for v at every sample.

    ``starts`` has shape (N, 2) with strictly positive entries.
    """
    dt = settings.dt if dt is None else dt
    slack = settings.envelope_slack
    u0, v0 = starts[:, 0], starts[:, 1]
    max_u = max_v = 0.0
    bad = np.zeros(starts.shape[0], dtype=bool)
    for t, y in stream_rk4(p, starts.T, t_end, dt):
        ratio_u = y[0] / upper_envelope(p, u0, t)
        ratio_v = y[1] / upper_envelope_v(p, v0, t)
        max_u = max(max_u, float(ratio_u.max()))
        max_v = max(max_v, float(ratio_v.max()))
        bad |= (ratio_u > 1.0 + slack) | (ratio_v > 1.0 + slack)
    count = int(bad.sum())
    if count:
        logger.warning(f"{count} trajectories exceeded their upper envelope")
    return EnvelopeReport(starts.shape[0], t_end, max_u, max_v, slack, count)
