"""Rionero's peculiar Liapunov function for the conjectural equilibrium.

V = 1/2 [A0 (U^2 + V^2) + (a11 V - a21 U)^2 + (a12 V - a22 U)^2]

Along solutions dV/dt = -A0 |I0| (U^2 + V^2) + Psi, with Psi cubic in (U, V).
The bundle collects every constant of the nonlinear stability estimate:

    delta1 E <= V <= delta2 E,   |Psi| <= sqrt(2) M E^(3/2),   E = U^2 + V^2
    dV/dt <= -(h1 - h2 sqrt(V)) V

so that h2 sqrt(V(0)) = eta h1 with eta < 1 gives V(t) <= V(0) exp(-(1 - eta) h1 t).
"""
import logging
import math
from dataclasses import dataclass, replace as dc_replace
from numbers import Real
from typing import Union

import numpy as np

from duopoly.equilibria.critical import JacobianData
from duopoly.errors import OutsideCertifiedBasin, UnstableAnchor
from duopoly.model.core import ModelParams, Perturbation, nonlinearity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LiapunovBundle:
    jac: JacobianData
    alpha1: Real
    alpha2: Real
    alpha3: Real
    m1: Real
    m2: Real
    m3: Real
    m4: Real
    M: Real
    delta1: Real
    delta2: Real
    h1: Real
    h2: float
    # disc from the local stability condition
    radius_sq: Real
    # disc on which every initial datum has h2*sqrt(V(0)) < h1
    certified_radius_sq: Real
    global_ok: bool
    alpha3_flagged: bool

    @property
    def decay_rate(self) -> Real:
        """A0 |I0|, the quadratic decay coefficient of dV/dt."""
        return self.jac.A0 * abs(self.jac.I0)

    def as_float(self) -> "LiapunovBundle":
        """Float copy, suitable for evaluating V on numpy arrays."""
        jac = dc_replace(self.jac, **{k: float(getattr(self.jac, k)) for k in _JAC_FIELDS})
        return dc_replace(self, jac=jac, **{k: float(getattr(self, k)) for k in _NUMERIC_FIELDS})


_JAC_FIELDS = ("a11", "a12", "a21", "a22", "I0", "A0", "disc")
_NUMERIC_FIELDS = (
    "alpha1", "alpha2", "alpha3", "m1", "m2", "m3", "m4", "M",
    "delta1", "delta2", "h1", "h2", "radius_sq", "certified_radius_sq",
)


def build_bundle(j: JacobianData, p: ModelParams) -> LiapunovBundle:
    """All constants of the nonlinear stability estimate at a linearly stable anchor."""
    A0, I0 = j.A0, j.I0
    if not (A0 > 0 and I0 < 0):
        raise UnstableAnchor(f"Anchor is not linearly stable (I0={I0}, A0={A0})")

    a11, a12, a21, a22 = j.a11, j.a12, j.a21, j.a22
    alpha1 = A0 + a21 * a21 + a22 * a22
    alpha2 = A0 + a11 * a11 + a12 * a12
    alpha3 = a11 * a21 + a12 * a22

    m1 = abs(alpha3 * (p.a * p.L1 + p.nu * p.gamma) - alpha1 * p.a * p.gamma)
    m2 = abs(alpha3 * (p.nu * p.L2 + p.a * p.gamma) - alpha2 * p.nu * p.gamma)
    m3 = alpha1 * p.a * p.L1
    m4 = alpha2 * p.nu * p.L2
    M = max(m1, m2, m3, m4)

    delta1 = A0 / 2
    delta2 = A0 / 2 + a11 * a11 + a21 * a21 + a12 * a12 + a22 * a22

    rate = A0 * abs(I0)
    h1 = rate / delta2
    h2 = math.sqrt(2.0) * float(M) / float(delta1) ** 1.5

    radius_sq = (rate * delta1) ** 2 / (2 * M * M * delta2 * delta2)
    certified_radius_sq = rate * rate * delta1 ** 3 / (2 * M * M * delta2 ** 3)
    global_ok = p.theta1 ** 2 / p.L1 ** 2 + p.theta2 ** 2 / p.L2 ** 2 <= radius_sq

    alpha3_flagged = alpha3 <= 0
    if alpha3_flagged:
        logger.warning(f"alpha3 = {alpha3} is not positive at this anchor")

    return LiapunovBundle(
        jac=j,
        alpha1=alpha1,
        alpha2=alpha2,
        alpha3=alpha3,
        m1=m1,
        m2=m2,
        m3=m3,
        m4=m4,
        M=M,
        delta1=delta1,
        delta2=delta2,
        h1=h1,
        h2=h2,
        radius_sq=radius_sq,
        certified_radius_sq=certified_radius_sq,
        global_ok=bool(global_ok),
        alpha3_flagged=bool(alpha3_flagged),
    )


def liapunov_v(bundle: LiapunovBundle, pert: Perturbation) -> Real:
    """
    Liapunov function V at a perturbation from E3.

    V = [A0 (U^2 + V^2) + (a11 V - a21 U)^2 + (a12 V - a22 U)^2] / 2, built from
    the Jacobian entries at E3. Works on scalars, arrays and exact rationals.

    Args:
        bundle: Liapunov bundle at E3
        pert: Perturbation (U, V) from the anchor

    Returns:
        V, with the type and shape of pert.U
    """
    j = bundle.jac
    U, V = pert.U, pert.V
    return (j.A0 * (U * U + V * V) + (j.a11 * V - j.a21 * U) ** 2 + (j.a12 * V - j.a22 * U) ** 2) / 2


def psi(bundle: LiapunovBundle, pert: Perturbation, p: ModelParams) -> Real:
    """Cubic remainder (alpha1 U - alpha3 V) f + (alpha2 V - alpha3 U) g."""
    f, g = nonlinearity(p, pert)
    U, V = pert.U, pert.V
    return (bundle.alpha1 * U - bundle.alpha3 * V) * f + (bundle.alpha2 * V - bundle.alpha3 * U) * g


def liapunov_vdot(bundle: LiapunovBundle, pert: Perturbation, p: ModelParams) -> Real:
    """
    Closed-form time derivative of V along solutions.

    Args:
        bundle: Liapunov bundle at E3
        pert: Perturbation (U, V) from the anchor
        p: Model parameters, used for the nonlinear terms

    Returns:
        -A0 |I0| (U^2 + V^2) + psi
    """
    return -bundle.decay_rate * pert.norm_sq + psi(bundle, pert, p)


def certified_eta(bundle: LiapunovBundle, v0: Real) -> float:
    """eta defined by h2 sqrt(V(0)) = eta h1; raises outside the certified basin."""
    if v0 < 0:
        raise ValueError(f"V(0) must be non-negative, got {v0}")
    eta = bundle.h2 * math.sqrt(float(v0)) / float(bundle.h1)
    if eta >= 1.0:
        raise OutsideCertifiedBasin(f"h2*sqrt(V0) >= h1 (eta={eta:.6g})")
    return eta


def envelope_curve(v0: Real, h1: Real, eta: float, t) -> Union[float, np.ndarray]:
    """V(0) exp(-(1 - eta) h1 t) without any basin check."""
    return float(v0) * np.exp(-(1.0 - eta) * float(h1) * np.asarray(t, dtype=float))


def decay_envelope(v0: Real, bundle: LiapunovBundle, eta: float, t) -> Union[float, np.ndarray]:
    """Exponential decay envelope for V; ``t`` may be a scalar or an array."""
    if bundle.h2 * math.sqrt(float(v0)) >= float(bundle.h1):
        raise OutsideCertifiedBasin(f"V0={v0} is outside the certified basin")
    if not 0.0 <= eta < 1.0:
        raise ValueError(f"eta must lie in [0, 1), got {eta}")
    env = envelope_curve(v0, bundle.h1, eta, t)
    return float(env) if env.ndim == 0 else env


def local_condition(bundle: LiapunovBundle, pert0: Perturbation) -> bool:
    """U0^2 + V0^2 <= (A0 |I0| delta1)^2 / (2 M^2 delta2^2)."""
    return pert0.norm_sq <= bundle.radius_sq


def in_certified_basin(bundle: LiapunovBundle, pert0: Perturbation) -> bool:
    """True when V(0) yields eta < 1."""
    return bundle.h2 * math.sqrt(float(liapunov_v(bundle, pert0))) < float(bundle.h1)
