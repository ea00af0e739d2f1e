"""Generic peculiar Liapunov construction for a planar system.

    dx/dt = a x + b y + f(x, y)
    dy/dt = c x + d y + g(x, y)

The printed construction carries a leading trace factor I in W and writes
dW/dt = I A (x^2 + y^2) + Psi. Without that factor W is the conjectural
equilibrium's V, which is the positive definite certifier used elsewhere.
"""
from dataclasses import dataclass
from numbers import Real
from typing import Callable, Tuple

import numpy as np

from duopoly.liapunov.rionero import LiapunovBundle
from duopoly.model.core import ModelParams, Perturbation, State, nonlinearity

Nonlinearity = Callable[[Real, Real], Tuple[Real, Real]]


def _no_nonlinearity(x: Real, y: Real) -> Tuple[Real, Real]:
    return 0 * x, 0 * y


@dataclass(frozen=True)
class PlanarSystem:
    a: Real
    b: Real
    c: Real
    d: Real
    nonlinearity: Nonlinearity = _no_nonlinearity

    @property
    def I(self) -> Real:
        return self.a + self.d

    @property
    def A(self) -> Real:
        return self.a * self.d - self.b * self.c

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(np.array([[float(self.a), float(self.b)], [float(self.c), float(self.d)]]))


def peculiar_planar(sys: PlanarSystem, point: Tuple[Real, Real], printed_factor: bool = True) -> Tuple[Real, Real]:
    """(W, dW/dt) at ``point``; ``printed_factor=False`` drops the leading I."""
    x, y = point
    I, A = sys.I, sys.A
    alpha1 = A + sys.c * sys.c + sys.d * sys.d
    alpha2 = A + sys.a * sys.a + sys.b * sys.b
    alpha3 = sys.a * sys.c + sys.b * sys.d
    f, g = sys.nonlinearity(x, y)

    quad = (A * (x * x + y * y) + (sys.a * y - sys.c * x) ** 2 + (sys.b * y - sys.d * x) ** 2) / 2
    cubic = (alpha1 * x - alpha3 * y) * f + (alpha2 * y - alpha3 * x) * g
    linear = I * A * (x * x + y * y)
    if printed_factor:
        return I * quad, linear + I * cubic
    return quad, linear + cubic


def planar_from_bundle(bundle: LiapunovBundle, p: ModelParams) -> PlanarSystem:
    """The duopoly perturbation system around the bundle's anchor."""
    j = bundle.jac
    origin = State(0 * p.a, 0 * p.a)

    def duopoly_nonlinearity(x: Real, y: Real) -> Tuple[Real, Real]:
        return nonlinearity(p, Perturbation(x, y, origin))

    return PlanarSystem(j.a11, j.a12, j.a21, j.a22, duopoly_nonlinearity)
