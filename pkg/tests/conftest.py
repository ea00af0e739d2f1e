"""Shared fixtures: the reference parameter set and random admissible draws."""
from fractions import Fraction

import numpy as np
import pytest

from duopoly.model import ModelParams
from duopoly.verifier import sample_admissible

P_STAR = dict(a=0.5, nu=1 / 3, gamma=1.0, theta1=3.0, theta2=2.0, L1=3.0, L2=2.0)
P_STAR_EXACT = dict(
    a=Fraction(1, 2), nu=Fraction(1, 3), gamma=Fraction(1), theta1=Fraction(3),
    theta2=Fraction(2), L1=Fraction(3), L2=Fraction(2),
)

P_STAR_CONFIG = "\n".join([
    "# reference duopoly",
    "a = 0.5",
    "nu = 0.3333333333333333",
    "gamma = 1",
    "theta1 = 3",
    "theta2 = 2",
    "L1 = 3",
    "L2 = 2",
]) + "\n"


@pytest.fixture
def p_star() -> ModelParams:
    return ModelParams(**P_STAR)


@pytest.fixture
def p_star_exact() -> ModelParams:
    return ModelParams(**P_STAR_EXACT)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def admissible_params():
    return sample_admissible(np.random.default_rng(7), 25)


@pytest.fixture
def p_star_config(tmp_path):
    path = tmp_path / "pstar.conf"
    path.write_text(P_STAR_CONFIG, encoding="utf-8")
    return path
