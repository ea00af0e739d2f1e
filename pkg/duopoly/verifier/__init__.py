"""Verifier module."""
from .uniqueness import (
    UniquenessCertificate,
    gap_bound,
    gap_horizon,
    kappa_bound,
    random_pairs,
    uniqueness_batch,
    uniqueness_gap_check,
)
from .sampling import AdmissibleDraws, basin_perturbations, draw_admissible, near_degenerate, sample_admissible
from .certification import (
    SUITES,
    DecayReport,
    DiscreteReport,
    FixedPointCheck,
    SuiteOptions,
    decay_batch,
    decay_conformance,
    discrete_vs_continuous,
    run_suite,
)

__all__ = [
    'SUITES',
    'AdmissibleDraws',
    'DecayReport',
    'DiscreteReport',
    'FixedPointCheck',
    'SuiteOptions',
    'UniquenessCertificate',
    'basin_perturbations',
    'decay_batch',
    'decay_conformance',
    'discrete_vs_continuous',
    'draw_admissible',
    'gap_bound',
    'gap_horizon',
    'kappa_bound',
    'near_degenerate',
    'random_pairs',
    'run_suite',
    'sample_admissible',
    'uniqueness_batch',
    'uniqueness_gap_check',
]
