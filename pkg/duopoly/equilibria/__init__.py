"""Equilibria module."""
from .critical import (
    Classification,
    CriticalPoint,
    EquilibriumKind,
    EquilibriumReport,
    JacobianData,
    analyze_equilibria,
    classify,
    closed_form_traces,
    conjectural_equilibrium,
    critical_points,
    e3_admissible,
    e3_identity_jacobian,
    e3_numerators,
    finite_difference_jacobian,
    jacobian_at,
)

__all__ = [
    'Classification',
    'CriticalPoint',
    'EquilibriumKind',
    'EquilibriumReport',
    'JacobianData',
    'analyze_equilibria',
    'classify',
    'closed_form_traces',
    'conjectural_equilibrium',
    'critical_points',
    'e3_admissible',
    'e3_identity_jacobian',
    'e3_numerators',
    'finite_difference_jacobian',
    'jacobian_at',
]
