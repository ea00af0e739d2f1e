"""Parameters, states and right-hand sides of the conjectural variation duopoly.

All functions are generic over the number type carried by ``ModelParams``: floats
for simulation, ``fractions.Fraction`` for exact oracles (see ``ModelParams.exact``).
"""
import logging
import math
from dataclasses import dataclass, fields, replace as dc_replace
from fractions import Fraction
from numbers import Real
from typing import Dict, List, Mapping, Tuple

import numpy as np

from duopoly.config import settings
from duopoly.errors import InvalidParameters

logger = logging.getLogger(__name__)

PARAM_KEYS = ("a", "nu", "gamma", "theta1", "theta2", "L1", "L2")


@dataclass(frozen=True)
class ModelParams:
    """The seven positive model constants.

    a, nu: output adjustment speeds of firms X and Y (1/time)
    gamma: cross-effect coefficient
    theta1, theta2: net marginal revenue intercepts alpha_i - c_i
    L1, L2: own-effect slopes
    """

    a: Real
    nu: Real
    gamma: Real
    theta1: Real
    theta2: Real
    L1: Real
    L2: Real

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, Real):
                raise InvalidParameters(f"{f.name} must be a real number, got {value!r}")
            if not math.isfinite(value) or value <= 0:
                raise InvalidParameters(f"{f.name} must be finite and strictly positive, got {value!r}")

    @classmethod
    def exact(cls, **values) -> "ModelParams":
        """Build parameters as exact rationals; floats go through their decimal repr."""
        return cls(**{k: v if isinstance(v, Fraction) else Fraction(str(v)) for k, v in values.items()})

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "ModelParams":
        """Strict construction: every key required, unknown keys rejected."""
        unknown = sorted(set(mapping) - set(PARAM_KEYS))
        if unknown:
            raise InvalidParameters(f"Unknown parameter keys: {', '.join(unknown)}")
        missing = [k for k in PARAM_KEYS if k not in mapping]
        if missing:
            raise InvalidParameters(f"Missing parameter keys: {', '.join(missing)}")
        return cls(**{k: mapping[k] for k in PARAM_KEYS})

    def as_float(self) -> "ModelParams":
        """Copy with every parameter converted to float (exact rationals round once)."""
        return ModelParams(**{k: float(v) for k, v in self.as_dict().items()})

    def as_dict(self) -> Dict[str, Real]:
        return {k: getattr(self, k) for k in PARAM_KEYS}

    def replace(self, **changes) -> "ModelParams":
        return dc_replace(self, **changes)


@dataclass(frozen=True)
class State:
    """One market state: outputs u (firm X) and v (firm Y)."""

    u: Real
    v: Real

    def in_first_orthant(self, tol: float = None) -> bool:
        tol = settings.orthant_tol if tol is None else tol
        return self.u >= -tol and self.v >= -tol

    def as_array(self) -> np.ndarray:
        return np.array([float(self.u), float(self.v)])

    def __iter__(self):
        yield self.u
        yield self.v


@dataclass(frozen=True)
class Perturbation:
    """Deviation (U, V) = (u - u_bar, v - v_bar) from an anchor equilibrium."""

    U: Real
    V: Real
    anchor: State

    @classmethod
    def from_state(cls, s: State, anchor: State) -> "Perturbation":
        return cls(U=s.u - anchor.u, V=s.v - anchor.v, anchor=anchor)

    def to_state(self) -> State:
        return State(self.anchor.u + self.U, self.anchor.v + self.V)

    @property
    def norm_sq(self) -> Real:
        return self.U * self.U + self.V * self.V

    def is_zero(self) -> bool:
        return self.U == 0 and self.V == 0


def marginal_profit(p: ModelParams, s: State) -> Tuple[Real, Real]:
    """Marginal profit functions (Pi_x, Pi_y) of constant conjectural variation."""
    pi_x = p.theta1 - p.gamma * s.v - p.L1 * s.u
    pi_y = p.theta2 - p.gamma * s.u - p.L2 * s.v
    return pi_x, pi_y


def vector_field(p: ModelParams, s: State) -> Tuple[Real, Real]:
    """Right-hand side (du/dt, dv/dt) of the continuous system."""
    pi_x, pi_y = marginal_profit(p, s)
    return p.a * s.u * pi_x, p.nu * s.v * pi_y


def field_array(p: ModelParams, y: np.ndarray) -> np.ndarray:
    """Vectorised vector field; ``y`` has shape (2, ...) with rows u and v."""
    u, v = y[0], y[1]
    du = p.a * u * (p.theta1 - p.gamma * v - p.L1 * u)
    dv = p.nu * v * (p.theta2 - p.gamma * u - p.L2 * v)
    return np.stack((du, dv))


def discrete_step(p: ModelParams, s: State) -> State:
    """One step of the bounded-rationality map. The result may leave the orthant."""
    pi_x, pi_y = marginal_profit(p, s)
    return State(s.u + p.a * s.u * pi_x, s.v + p.nu * s.v * pi_y)


def iterate_map(p: ModelParams, s0: State, steps: int) -> List[State]:
    """Orbit s0, F(s0), ..., F^steps(s0) of the discrete map."""
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    orbit = [s0]
    for _ in range(steps):
        nxt = discrete_step(p, orbit[-1])
        if not nxt.in_first_orthant():
            logger.debug(f"Discrete orbit left the first orthant at step {len(orbit)}: {nxt}")
        orbit.append(nxt)
    return orbit


def nonlinearity(p: ModelParams, pert: Perturbation) -> Tuple[Real, Real]:
    """Quadratic remainders f(U, V), g(U, V) of the perturbation system."""
    U, V = pert.U, pert.V
    f = -p.a * p.gamma * U * V - p.a * p.L1 * U * U
    g = -p.nu * p.gamma * U * V - p.nu * p.L2 * V * V
    return f, g


def perturbation_field(p: ModelParams, pert: Perturbation) -> Tuple[Real, Real]:
    """(dU/dt, dV/dt): the vector field evaluated at anchor + (U, V).

    Equals the linear part plus ``nonlinearity`` whenever the anchor is a critical point.
    """
    return vector_field(p, pert.to_state())
