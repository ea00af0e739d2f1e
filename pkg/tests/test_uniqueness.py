import math

import numpy as np
import pytest

from duopoly.errors import HorizonExceeded
from duopoly.model import State
from duopoly.verifier import (
    gap_bound,
    gap_horizon,
    kappa_bound,
    random_pairs,
    uniqueness_batch,
    uniqueness_gap_check,
)
from duopoly.verifier.uniqueness import GAP_NOISE_FLOOR

KAPPA_STAR = 3.0 + 5.0 * math.sqrt(2.0) / 3.0


class TestGapBound:
    def test_kappa_for_reference_set(self, p_star):
        assert kappa_bound(p_star) == pytest.approx(KAPPA_STAR, rel=1e-12)
        assert kappa_bound(p_star) == pytest.approx(5.357, abs=1e-3)

    def test_horizon(self):
        assert gap_horizon(1e-4, 2.0) == pytest.approx(math.log(101.0), rel=1e-12)
        assert gap_horizon(0.0, 2.0) == math.inf
        with pytest.raises(ValueError):
            gap_horizon(1e-4, 0.0)
        with pytest.raises(ValueError):
            gap_horizon(-1e-4, 1.0)

    def test_bound_starts_at_initial_gap_and_grows(self):
        assert gap_bound(1e-6, KAPPA_STAR, 0.0) == pytest.approx(1e-6, rel=1e-15)
        values = [gap_bound(1e-6, KAPPA_STAR, t) for t in (0.0, 0.5, 1.0, 2.0)]
        assert values == sorted(values)
        assert gap_bound(0.0, KAPPA_STAR, 10.0) == 0.0

    def test_past_the_horizon(self):
        horizon = gap_horizon(1e-4, KAPPA_STAR)
        assert gap_bound(1e-4, KAPPA_STAR, 0.99 * horizon) > 1e-4
        with pytest.raises(HorizonExceeded):
            gap_bound(1e-4, KAPPA_STAR, horizon)
        with pytest.raises(HorizonExceeded):
            gap_bound(1e-4, KAPPA_STAR, 2 * horizon)


class TestGapCheck:
    def test_small_separation_stays_under_the_bound(self, p_star):
        cert = uniqueness_gap_check(p_star, State(0.5, 0.5), (1e-6, 0.0), t_end=1.0, dt=1e-3)
        assert cert.G0 == pytest.approx(1e-12)
        assert not cert.truncated
        assert cert.t_checked == 1.0
        assert cert.max_ratio <= 1.0
        assert cert.passed
        assert cert.gap_bound(0.5) == pytest.approx(gap_bound(cert.G0, cert.kappa, 0.5))

    def test_identical_starts_do_not_separate(self, p_star):
        cert = uniqueness_gap_check(p_star, State(0.3, 0.7), (0.0, 0.0), t_end=1.0, dt=1e-3)
        assert cert.G0 == 0.0
        assert cert.horizon == math.inf
        assert cert.observed_max_gap <= GAP_NOISE_FLOOR
        assert cert.passed

    def test_understated_kappa_is_caught(self, p_star):
        cert = uniqueness_gap_check(p_star, State(0.1, 0.1), (1e-3, 1e-3), t_end=1.0, dt=1e-3, kappa=0.01)
        assert cert.max_ratio > 1.0
        assert not cert.passed

    def test_pairs_near_equilibrium_contract(self, p_star):
        cert = uniqueness_gap_check(p_star, State(0.8, 0.6), (1e-4, -1e-4), t_end=1.0, dt=1e-3)
        assert cert.contracting
        assert cert.final_gap < cert.G0
        assert cert.passed

    def test_long_runs_are_truncated_to_the_horizon(self, p_star):
        cert = uniqueness_gap_check(p_star, State(0.5, 0.5), (1e-2, 0.0), t_end=5.0, dt=1e-3)
        assert cert.truncated
        assert cert.t_checked == pytest.approx(0.9 * cert.horizon)
        assert cert.passed

    def test_rejects_points_outside_the_rectangle(self, p_star):
        with pytest.raises(ValueError, match="not inside"):
            uniqueness_gap_check(p_star, State(1.5, 0.5), (1e-6, 0.0), t_end=1.0)
        with pytest.raises(ValueError, match="perturbed"):
            uniqueness_gap_check(p_star, State(1.0, 0.5), (1e-6, 0.0), t_end=1.0)


class TestBatch:
    def test_random_pairs_stay_inside(self, p_star, rng):
        starts, deltas = random_pairs(p_star, 50, rng)
        assert starts.shape == deltas.shape == (50, 2)
        partners = starts + deltas
        for pts in (starts, partners):
            assert np.all(pts > 0) and np.all(pts <= 1.0)

    def test_batch_matches_single_checks(self, p_star, rng):
        starts, deltas = random_pairs(p_star, 4, rng)
        batch = uniqueness_batch(p_star, starts, deltas, t_end=1.0, dt=1e-3)
        assert len(batch) == 4
        for i, cert in enumerate(batch):
            single = uniqueness_gap_check(p_star, State(*starts[i]), tuple(deltas[i]), t_end=1.0, dt=1e-3)
            assert cert.s0 == single.s0
            assert cert.max_ratio == pytest.approx(single.max_ratio, rel=1e-9)
            assert cert.passed

    def test_random_draws_respect_the_bound(self, admissible_params, rng):
        for p in admissible_params[:5]:
            starts, deltas = random_pairs(p, 10, rng)
            assert all(c.passed for c in uniqueness_batch(p, starts, deltas, t_end=0.5, dt=1e-3))
