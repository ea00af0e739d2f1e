"""Integrator module."""
from .runge_kutta import METHODS, Trajectory, convergence_order, integrate, rk4_step, stream_rk4
from .absorbing import (
    AbsorbingRect,
    EnvelopeReport,
    InvarianceReport,
    check_envelopes,
    check_positive_invariance,
    entry_time,
    envelope_crossing_time,
    envelope_limit,
    random_interior_points,
    upper_envelope,
    upper_envelope_v,
)

__all__ = [
    'METHODS',
    'AbsorbingRect',
    'EnvelopeReport',
    'InvarianceReport',
    'Trajectory',
    'check_envelopes',
    'check_positive_invariance',
    'convergence_order',
    'entry_time',
    'envelope_crossing_time',
    'envelope_limit',
    'integrate',
    'random_interior_points',
    'rk4_step',
    'stream_rk4',
    'upper_envelope',
    'upper_envelope_v',
]
