"""Gronwall gap bound between two solutions started inside the absorbing rectangle.

With G = (u1 - u2)^2 + (v1 - v2)^2 the bound reads

    G(t) <= G0 exp(kappa t) / [1 + sqrt(G0) (1 - exp(kappa t / 2))]^2

and is finite until exp(kappa t / 2) = 1 + 1 / sqrt(G0).
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from duopoly.config import settings
from duopoly.errors import HorizonExceeded
from duopoly.integrator.absorbing import AbsorbingRect
from duopoly.integrator.runge_kutta import stream_rk4
from duopoly.model.core import ModelParams, State

logger = logging.getLogger(__name__)

# observed gap for identical initial data must stay below this
GAP_NOISE_FLOOR = 1e-12
RATIO_SLACK = 1e-9


def kappa_bound(p: ModelParams) -> float:
    """Conservative Gronwall constant over S.

    Over S the linear gap terms are bounded by 2 max(a theta1, nu theta2). The bilinear
    terms use |u1 v1 - u2 v2| <= (theta2/L2)|du| + (theta1/L1)|dv| together with
    |du| + |dv| <= sqrt(2) |(du, dv)|, giving

        kappa = 2 max(a theta1, nu theta2) + sqrt(2) gamma (a + nu) (theta1/L1 + theta2/L2)
    """
    pf = p.as_float()
    linear = 2.0 * max(pf.a * pf.theta1, pf.nu * pf.theta2)
    cross = math.sqrt(2.0) * pf.gamma * (pf.a + pf.nu) * (pf.theta1 / pf.L1 + pf.theta2 / pf.L2)
    return linear + cross


def gap_horizon(G0: float, kappa: float) -> float:
    """Time at which the bound's denominator vanishes; infinite for G0 = 0."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if G0 < 0:
        raise ValueError(f"G0 must be non-negative, got {G0}")
    if G0 == 0:
        return math.inf
    return 2.0 / kappa * math.log1p(1.0 / math.sqrt(G0))


def _bound(G0, kappa: float, t):
    grow = np.exp(0.5 * kappa * np.asarray(t, dtype=float))
    denom = 1.0 + np.sqrt(G0) * (1.0 - grow)
    return G0 * grow * grow / (denom * denom)


def gap_bound(G0: float, kappa: float, t: float) -> float:
    """Closed-form gap bound at time t; raises HorizonExceeded at or past the blow-up."""
    horizon = gap_horizon(G0, kappa)
    if t >= horizon:
        raise HorizonExceeded(f"t={t} is past the gap bound horizon {horizon:.6g}")
    return float(_bound(G0, kappa, t))


@dataclass
class UniquenessCertificate:
    s0: State
    G0: float
    kappa: float
    horizon: float
    t_checked: float
    truncated: bool
    observed_max_gap: float
    final_gap: float
    max_ratio: float
    contracting: bool

    def gap_bound(self, t: float) -> float:
        return gap_bound(self.G0, self.kappa, t)

    @property
    def passed(self) -> bool:
        if self.G0 == 0:
            return self.observed_max_gap <= GAP_NOISE_FLOOR
        return self.max_ratio <= 1.0 + RATIO_SLACK


def _require_inside(rect: AbsorbingRect, points: np.ndarray, label: str):
    inside = (points[:, 0] > 0) & (points[:, 0] <= rect.u_max) & (points[:, 1] > 0) & (points[:, 1] <= rect.v_max)
    if not np.all(inside):
        bad = int(np.nonzero(~inside)[0][0])
        raise ValueError(f"{label} {points[bad].tolist()} is not inside S")


def uniqueness_batch(
    p: ModelParams,
    starts: np.ndarray,
    deltas: np.ndarray,
    t_end: float,
    dt: float = None,
    kappa: Optional[float] = None,
) -> List[UniquenessCertificate]:
    """Certificates for pairs (starts[i], starts[i] + deltas[i]), integrated together.

    Each pair is checked up to min(t_end, horizon_fraction * horizon); results keep input order.
    """
    dt = settings.dt if dt is None else dt
    kappa = kappa_bound(p) if kappa is None else float(kappa)
    starts = np.asarray(starts, dtype=float)
    partners = starts + np.asarray(deltas, dtype=float)
    rect = AbsorbingRect.from_params(p)
    _require_inside(rect, starts, "start")
    _require_inside(rect, partners, "perturbed start")

    n = starts.shape[0]
    G0 = np.sum((partners - starts) ** 2, axis=1)
    horizons = np.array([gap_horizon(g, kappa) for g in G0])
    t_checked = np.minimum(t_end, settings.horizon_fraction * horizons)
    truncated = t_checked < t_end
    if np.any(truncated):
        logger.info(f"{int(truncated.sum())} pairs restricted to {settings.horizon_fraction:.0%} of their horizon")

    y0 = np.concatenate([starts.T, partners.T], axis=1)
    max_gap = G0.copy()
    final_gap = G0.copy()
    max_ratio = np.where(G0 > 0, 1.0, 0.0)
    contracting = np.ones(n, dtype=bool)
    previous = G0.copy()
    positive = G0 > 0
    for t, y in stream_rk4(p, y0, float(t_checked.max()), dt):
        if t == 0.0:
            continue
        active = t <= t_checked
        gap = np.sum((y[:, n:] - y[:, :n]) ** 2, axis=0)
        max_gap = np.where(active, np.maximum(max_gap, gap), max_gap)
        final_gap = np.where(active, gap, final_gap)
        contracting &= ~active | (gap <= previous)
        previous = np.where(active, gap, previous)
        live = active & positive
        if np.any(live):
            bound = _bound(G0[live], kappa, t)
            ratio = np.full(n, 0.0)
            ratio[live] = gap[live] / bound
            max_ratio = np.maximum(max_ratio, ratio)

    certificates = [
        UniquenessCertificate(
            s0=State(float(starts[i, 0]), float(starts[i, 1])),
            G0=float(G0[i]),
            kappa=kappa,
            horizon=float(horizons[i]),
            t_checked=float(t_checked[i]),
            truncated=bool(truncated[i]),
            observed_max_gap=float(max_gap[i]),
            final_gap=float(final_gap[i]),
            max_ratio=float(max_ratio[i]),
            contracting=bool(contracting[i]),
        )
        for i in range(n)
    ]
    failed = sum(not c.passed for c in certificates)
    if failed:
        logger.warning(f"Gap bound violated for {failed} of {n} pairs (kappa={kappa:.6g})")
    return certificates


def uniqueness_gap_check(
    p: ModelParams,
    s0: State,
    delta0: Tuple[float, float],
    t_end: float,
    dt: float = None,
    kappa: Optional[float] = None,
) -> UniquenessCertificate:
    """Integrate s0 and s0 + delta0 and compare their squared gap with the closed-form bound."""
    starts = np.array([[float(s0.u), float(s0.v)]])
    deltas = np.array([[float(delta0[0]), float(delta0[1])]])
    return uniqueness_batch(p, starts, deltas, t_end, dt, kappa)[0]


def random_pairs(p: ModelParams, count: int, rng: np.random.Generator, max_delta: float = 1e-2):
    """Starts in the central part of S and small separations keeping both points in S.

    Returns (starts, deltas), each of shape (count, 2).
    """
    rect = AbsorbingRect.from_params(p)
    scale = np.array([rect.u_max, rect.v_max])
    starts = rng.uniform(0.05, 0.95, size=(count, 2)) * scale
    angle = rng.uniform(0.0, 2.0 * np.pi, size=count)
    radius = rng.uniform(0.0, 1.0, size=count) * max_delta * min(1.0, 0.05 * float(scale.min()))
    deltas = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    return starts, deltas
