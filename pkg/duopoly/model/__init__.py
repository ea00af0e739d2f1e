"""Model core module."""
from .core import (
    PARAM_KEYS,
    ModelParams,
    Perturbation,
    State,
    discrete_step,
    field_array,
    iterate_map,
    marginal_profit,
    nonlinearity,
    perturbation_field,
    vector_field,
)

__all__ = [
    'PARAM_KEYS',
    'ModelParams',
    'Perturbation',
    'State',
    'discrete_step',
    'field_array',
    'iterate_map',
    'marginal_profit',
    'nonlinearity',
    'perturbation_field',
    'vector_field',
]
