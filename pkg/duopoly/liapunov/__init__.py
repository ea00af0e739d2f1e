"""Liapunov module."""
from .rionero import (
    LiapunovBundle,
    build_bundle,
    certified_eta,
    decay_envelope,
    envelope_curve,
    in_certified_basin,
    liapunov_v,
    liapunov_vdot,
    local_condition,
    psi,
)
from .planar import PlanarSystem, peculiar_planar, planar_from_bundle

__all__ = [
    'LiapunovBundle',
    'PlanarSystem',
    'build_bundle',
    'certified_eta',
    'decay_envelope',
    'envelope_curve',
    'in_certified_basin',
    'liapunov_v',
    'liapunov_vdot',
    'local_condition',
    'peculiar_planar',
    'planar_from_bundle',
    'psi',
]
