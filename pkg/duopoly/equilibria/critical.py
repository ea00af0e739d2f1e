"""Critical points, linearisation and trace-determinant classification."""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from numbers import Real
from typing import Dict, List, Optional, Tuple

import numpy as np

from duopoly.config import settings
from duopoly.errors import DegenerateEquilibrium
from duopoly.model.core import ModelParams, State, vector_field

logger = logging.getLogger(__name__)


class EquilibriumKind(str, Enum):
    ORIGIN = "E0"
    BOUNDARY_Y = "E1"
    BOUNDARY_X = "E2"
    CONJECTURAL = "E3"


class Classification(str, Enum):
    STABLE_NODE = "stable node"
    UNSTABLE_NODE = "unstable node"
    SADDLE = "saddle"
    # complex pair, flagged only
    FOCUS = "focus"
    NON_HYPERBOLIC = "non-hyperbolic"


@dataclass(frozen=True)
class JacobianData:
    """Linearisation of the perturbation system at a state.

    Eigenvalues are floats sorted ascending; both are None when disc < 0.
    """

    a11: Real
    a12: Real
    a21: Real
    a22: Real
    I0: Real
    A0: Real
    disc: Real
    lambda1: Optional[float] = None
    lambda2: Optional[float] = None

    @property
    def complex_pair(self) -> bool:
        return self.lambda1 is None

    @property
    def repeated(self) -> bool:
        return self.lambda1 is not None and self.lambda1 == self.lambda2

    def matrix(self) -> np.ndarray:
        return np.array([[float(self.a11), float(self.a12)], [float(self.a21), float(self.a22)]])


@dataclass(frozen=True)
class CriticalPoint:
    kind: EquilibriumKind
    state: Optional[State]
    admissible: bool
    degenerate: bool = False


@dataclass(frozen=True)
class EquilibriumReport:
    """An equilibrium with its admissibility, linearisation and classification."""

    kind: EquilibriumKind
    point: Optional[State]
    admissible: bool
    degenerate: bool
    jacobian: Optional[JacobianData]
    classification: Optional[Classification]


def e3_numerators(p: ModelParams) -> Tuple[Real, Real, Real]:
    """(theta1*L2 - theta2*gamma, theta2*L1 - theta1*gamma, L1*L2 - gamma^2)."""
    n1 = p.theta1 * p.L2 - p.theta2 * p.gamma
    n2 = p.theta2 * p.L1 - p.theta1 * p.gamma
    d = p.L1 * p.L2 - p.gamma * p.gamma
    return n1, n2, d


def e3_admissible(p: ModelParams) -> bool:
    """
    Whether E3 lies strictly inside the first quadrant.

    Args:
        p: Model parameters, float or exact

    Returns:
        True when N1 > 0, N2 > 0 and D > 0
    """
    n1, n2, d = e3_numerators(p)
    return n1 > 0 and n2 > 0 and d > 0


def conjectural_equilibrium(p: ModelParams) -> State:
    """E3; raises DegenerateEquilibrium when L1*L2 = gamma^2 exactly."""
    n1, n2, d = e3_numerators(p)
    if d == 0:
        raise DegenerateEquilibrium(f"L1*L2 - gamma^2 = 0 for {p}")
    return State(n1 / d, n2 / d)


def critical_points(p: ModelParams) -> List[CriticalPoint]:
    """E0, E1, E2 and E3 in that order."""
    points = [
        CriticalPoint(EquilibriumKind.ORIGIN, State(0 * p.a, 0 * p.a), True),
        CriticalPoint(EquilibriumKind.BOUNDARY_Y, State(0 * p.a, p.theta2 / p.L2), True),
        CriticalPoint(EquilibriumKind.BOUNDARY_X, State(p.theta1 / p.L1, 0 * p.a), True),
    ]
    try:
        e3 = conjectural_equilibrium(p)
        points.append(CriticalPoint(EquilibriumKind.CONJECTURAL, e3, e3_admissible(p)))
    except DegenerateEquilibrium:
        logger.info(f"E3 undefined (degenerate) for {p}")
        points.append(CriticalPoint(EquilibriumKind.CONJECTURAL, None, False, degenerate=True))
    return points


def _real_eigenvalues(I0: Real, A0: Real, disc: Real, tol: float) -> Tuple[Optional[float], Optional[float]]:
    # roots of lambda^2 - I0*lambda + A0; large-magnitude root first, the other via A0/root
    if abs(disc) <= tol:
        half = float(I0) / 2.0
        return half, half
    if disc < 0:
        return None, None
    sq = math.sqrt(float(disc))
    big = (float(I0) + math.copysign(sq, float(I0))) / 2.0
    small = float(A0) / big
    return (small, big) if small <= big else (big, small)


def jacobian_at(p: ModelParams, s: State, tol: float = None) -> JacobianData:
    """Jacobian of the vector field at any first-orthant state."""
    tol = settings.degeneracy_tol if tol is None else tol
    u, v = s.u, s.v
    a11 = p.a * (p.theta1 - v * p.gamma - 2 * u * p.L1)
    a12 = -p.a * u * p.gamma
    a21 = -p.nu * p.gamma * v
    a22 = p.nu * (p.theta2 - p.gamma * u - 2 * v * p.L2)
    I0 = a11 + a22
    A0 = a11 * a22 - a12 * a21
    disc = I0 * I0 - 4 * A0
    lam1, lam2 = _real_eigenvalues(I0, A0, disc, tol)
    return JacobianData(a11, a12, a21, a22, I0, A0, disc, lam1, lam2)


def classify(j: JacobianData, tol: float = None) -> Classification:
    """Trace-determinant classification with an explicit hyperbolicity band."""
    tol = settings.degeneracy_tol if tol is None else tol
    if abs(j.I0) <= tol or abs(j.A0) <= tol or abs(j.disc) <= tol:
        return Classification.NON_HYPERBOLIC
    if j.A0 < 0:
        return Classification.SADDLE
    if j.disc < 0:
        return Classification.FOCUS
    return Classification.STABLE_NODE if j.I0 < 0 else Classification.UNSTABLE_NODE


def closed_form_traces(p: ModelParams) -> Dict[EquilibriumKind, Tuple[Real, Real]]:
    """(I0, A0) at each equilibrium from the explicit formulas; E3 only when admissible."""
    n1, n2, d = e3_numerators(p)
    table = {EquilibriumKind.ORIGIN: (p.a * p.theta1 + p.nu * p.theta2, p.a * p.theta1 * p.theta2 * p.nu)}

    lam_u = p.a * n1 / p.L2
    table[EquilibriumKind.BOUNDARY_Y] = (lam_u - p.nu * p.theta2, lam_u * (-p.nu * p.theta2))

    lam_v = p.nu * n2 / p.L1
    table[EquilibriumKind.BOUNDARY_X] = (lam_v - p.a * p.theta1, lam_v * (-p.a * p.theta1))

    if d != 0 and e3_admissible(p):
        table[EquilibriumKind.CONJECTURAL] = (
            -(p.a * p.L1 * n1) / d - (p.nu * p.L2 * n2) / d,
            p.a * p.nu * n1 * n2 / d,
        )
    return table


def e3_identity_jacobian(p: ModelParams) -> Tuple[Real, Real, Real, Real]:
    """Jacobian entries at E3 simplified with the defining equations."""
    e3 = conjectural_equilibrium(p)
    return (
        -p.a * p.L1 * e3.u,
        -p.a * p.gamma * e3.u,
        -p.nu * p.gamma * e3.v,
        -p.nu * p.L2 * e3.v,
    )


def finite_difference_jacobian(p: ModelParams, s: State, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of vector_field with step rel_step * scale."""
    p = p.as_float()
    u, v = float(s.u), float(s.v)
    h = rel_step * max(1.0, abs(u), abs(v))
    fu_plus = vector_field(p, State(u + h, v))
    fu_minus = vector_field(p, State(u - h, v))
    fv_plus = vector_field(p, State(u, v + h))
    fv_minus = vector_field(p, State(u, v - h))
    return np.array([
        [(fu_plus[0] - fu_minus[0]) / (2 * h), (fv_plus[0] - fv_minus[0]) / (2 * h)],
        [(fu_plus[1] - fu_minus[1]) / (2 * h), (fv_plus[1] - fv_minus[1]) / (2 * h)],
    ])


def analyze_equilibria(p: ModelParams, tol: float = None) -> List[EquilibriumReport]:
    """Critical points with Jacobian data and classification, E0..E3."""
    reports = []
    for cp in critical_points(p):
        if cp.state is None:
            reports.append(EquilibriumReport(cp.kind, None, False, True, None, None))
            continue
        jac = jacobian_at(p, cp.state, tol)
        cls = classify(jac, tol)
        reports.append(EquilibriumReport(cp.kind, cp.state, cp.admissible, cp.degenerate, jac, cls))
        logger.debug(f"{cp.kind.value} at ({cp.state.u}, {cp.state.v}): {cls.value}")
    return reports
