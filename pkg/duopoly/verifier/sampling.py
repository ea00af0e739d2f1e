"""Random draws used by the certification suite and its tests."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from duopoly.equilibria.critical import closed_form_traces
from duopoly.liapunov.rionero import LiapunovBundle
from duopoly.model.core import ModelParams, State

logger = logging.getLogger(__name__)

# keeps draws away from the admissibility boundary N1 = 0, N2 = 0
_MARGIN = 0.05
# trace and discriminant floor; below it classify would report non-hyperbolic
_HYPERBOLIC_FLOOR = 1e-6


@dataclass
class AdmissibleDraws:
    """Accepted parameter sets plus the near-degenerate draws that were set aside."""

    params: List[ModelParams]
    rejected: List[ModelParams] = field(default_factory=list)


def near_degenerate(p: ModelParams) -> Optional[str]:
    """Name the equilibrium whose trace or discriminant is within the floor, if any."""
    for kind, (I0, A0) in closed_form_traces(p).items():
        if abs(I0) < _HYPERBOLIC_FLOOR:
            return f"{kind.value} trace {float(I0):.3g}"
        if abs(I0 * I0 - 4 * A0) < _HYPERBOLIC_FLOOR:
            return f"{kind.value} discriminant {float(I0 * I0 - 4 * A0):.3g}"
    return None


def _draw(rng: np.random.Generator) -> ModelParams:
    a, nu = rng.uniform(0.1, 2.0, size=2)
    L1, L2 = rng.uniform(0.5, 5.0, size=2)
    gamma = rng.uniform(_MARGIN, 1.0 - _MARGIN) * np.sqrt(L1 * L2)
    theta1 = rng.uniform(0.5, 5.0)
    lo, hi = theta1 * gamma / L1, theta1 * L2 / gamma
    theta2 = lo + (hi - lo) * rng.uniform(_MARGIN, 1.0 - _MARGIN)
    return ModelParams(
        a=float(a), nu=float(nu), gamma=float(gamma),
        theta1=float(theta1), theta2=float(theta2), L1=float(L1), L2=float(L2),
    )


def draw_admissible(rng: np.random.Generator, count: int) -> AdmissibleDraws:
    """
    Draw ``count`` parameter sets with E3 strictly inside the first quadrant.

    gamma stays below sqrt(L1 L2) so D > 0, and theta2 is drawn strictly between
    theta1 gamma / L1 and theta1 L2 / gamma so N1 > 0 and N2 > 0. A draw with a
    trace or discriminant within the hyperbolicity floor at any equilibrium is
    logged, kept in ``rejected`` and replaced.

    Args:
        rng: Random generator
        count: Number of accepted parameter sets

    Returns:
        AdmissibleDraws with exactly ``count`` accepted sets
    """
    draws = AdmissibleDraws(params=[])
    while len(draws.params) < count:
        p = _draw(rng)
        reason = near_degenerate(p)
        if reason is None:
            draws.params.append(p)
        else:
            logger.warning(f"Near-degenerate draw set aside ({reason}): {p}")
            draws.rejected.append(p)
    return draws


def sample_admissible(rng: np.random.Generator, count: int) -> List[ModelParams]:
    """Accepted parameter sets only; see ``draw_admissible``."""
    return draw_admissible(rng, count).params


def basin_perturbations(
    bundle: LiapunovBundle,
    anchor: State,
    count: int,
    rng: np.random.Generator,
    fraction: float = 0.9,
) -> np.ndarray:
    """Initial states whose perturbation from ``anchor`` lies in the certified disc.

    The squared radius is at most ``fraction`` of certified_radius_sq and never more
    than a quarter of the anchor's smaller coordinate squared, so the states stay
    positive. Returns shape (count, 2).
    """
    limit = min(fraction * float(bundle.certified_radius_sq), 0.25 * min(float(anchor.u), float(anchor.v)) ** 2)
    radius = np.sqrt(rng.uniform(0.0, 1.0, size=count) * limit)
    angle = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return np.column_stack([
        float(anchor.u) + radius * np.cos(angle),
        float(anchor.v) + radius * np.sin(angle),
    ])
