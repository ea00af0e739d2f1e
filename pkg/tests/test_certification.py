import numpy as np
import pytest
from pydantic import ValidationError

from duopoly.equilibria import EquilibriumKind, conjectural_equilibrium, jacobian_at
from duopoly.liapunov import build_bundle
from duopoly.model import ModelParams, State
from duopoly.verifier import (
    SUITES,
    SuiteOptions,
    basin_perturbations,
    decay_batch,
    decay_conformance,
    discrete_vs_continuous,
    run_suite,
    sample_admissible,
)
from duopoly.verifier import certification
from duopoly.verifier.certification import anchor_rates, state_resolution, v_noise


@pytest.fixture
def bundle(p_star_exact):
    return build_bundle(jacobian_at(p_star_exact, conjectural_equilibrium(p_star_exact)), p_star_exact)


def _by_name(checks):
    return {c.name: c for c in checks}


class TestDecay:
    def test_start_at_equilibrium(self, p_star, bundle):
        report = decay_conformance(p_star, State(0.8, 0.6), bundle, t_end=5.0, dt=1e-2)
        assert report.status == "pass"
        assert report.V0 <= 1e-24
        assert report.local_ok

    def test_basin_starts_decay_at_least_as_predicted(self, p_star, bundle, rng):
        starts = basin_perturbations(bundle, State(0.8, 0.6), 8, rng)
        reports = decay_batch(p_star, bundle, starts, t_end=20.0, dt=1e-2)
        for r in reports:
            assert r.status == "pass", r
            assert r.local_ok
            assert 0.0 <= r.eta < 1.0
            assert r.monotone
            assert r.empirical_exponent >= r.predicted_exponent

    def test_start_outside_certified_basin(self, p_star, bundle):
        report = decay_conformance(p_star, State(0.9, 0.6), bundle, t_end=5.0, dt=1e-2)
        assert report.status == "uncertified"
        assert report.eta is None and report.predicted_exponent is None
        assert not report.local_ok

    def test_eta_override_is_never_certified(self, p_star, bundle):
        report = decay_conformance(p_star, State(0.801, 0.6), bundle, t_end=5.0, dt=1e-2, eta=0.5)
        assert report.status == "uncertified"
        assert report.eta == 0.5
        assert report.predicted_exponent == pytest.approx(0.16, rel=1e-12)

    def test_rising_v_fails_a_certified_start(self, p_star, bundle, monkeypatch):
        anchor = np.array([[0.8], [0.6]])

        def dip_then_rise(p, y0, t_end, dt):
            yield 0.0, y0
            yield dt, anchor + 0.1 * (y0 - anchor)
            yield 2 * dt, anchor + 0.5 * (y0 - anchor)

        monkeypatch.setattr(certification, "stream_rk4", dip_then_rise)
        starts = np.array([[0.805, 0.6]])
        report = decay_batch(p_star, bundle, starts, t_end=2e-2, dt=1e-2)[0]
        assert report.eta is not None and report.eta < 1.0
        assert report.max_excess <= 0.0
        assert not report.monotone
        assert report.status == "fail"

    @pytest.mark.slow
    def test_drawn_sets_decay_over_the_full_horizon(self):
        for q in sample_admissible(np.random.default_rng(123), 12):
            e3 = conjectural_equilibrium(q)
            b = build_bundle(jacobian_at(q, e3), q)
            starts = basin_perturbations(b, e3, 20, np.random.default_rng(9))
            reports = decay_batch(q, b, starts, t_end=50.0, dt=1e-3)
            assert all(r.status == "pass" for r in reports), (q, [r for r in reports if r.status != "pass"])
            assert all(r.monotone for r in reports)

    def test_basin_perturbations_stay_in_the_certified_disc(self, bundle, rng):
        starts = basin_perturbations(bundle, State(0.8, 0.6), 200, rng)
        norm_sq = (starts[:, 0] - 0.8) ** 2 + (starts[:, 1] - 0.6) ** 2
        assert starts.shape == (200, 2)
        assert np.all(norm_sq <= 0.9 * float(bundle.certified_radius_sq) * (1 + 1e-12))


class TestNoiseModel:
    def test_anchor_rates(self, p_star):
        slow, fast = anchor_rates(p_star, State(0.8, 0.6))
        assert slow == pytest.approx(0.8 - np.sqrt(0.24), rel=1e-12)
        assert fast == pytest.approx(0.8 + np.sqrt(0.24), rel=1e-12)

    def test_resolution_grows_as_the_step_shrinks(self):
        anchor = State(0.8, 0.6)
        coarse = state_resolution(anchor, 0.31, 1e-2)
        fine = state_resolution(anchor, 0.31, 1e-3)
        assert fine == pytest.approx(10.0 * coarse, rel=1e-12)

    def test_resolution_scales_with_the_anchor(self):
        small = state_resolution(State(0.8, 0.6), 0.31, 1e-3)
        large = state_resolution(State(4.0, 1.0), 0.31, 1e-3)
        assert large == pytest.approx(4.0 * small, rel=1e-12)

    def test_no_stall_factor_for_large_steps(self):
        eps = np.finfo(float).eps
        assert state_resolution(State(0.5, 0.5), 10.0, 1.0) == pytest.approx(certification.ROUNDOFF_ULPS * eps)

    def test_v_noise(self, bundle):
        fb = bundle.as_float()
        r = 1e-9
        assert v_noise(fb, r, 0.0) == pytest.approx(fb.delta2 * r * r, rel=1e-12)
        R = 1e-3
        assert v_noise(fb, r, fb.delta1 * R * R) == pytest.approx(fb.delta2 * r * (2 * R + r), rel=1e-9)

    def test_fit_drops_samples_under_the_floor(self):
        times = np.linspace(5.0, 20.0, 64)
        samples = [np.array([np.exp(-0.3 * t), 1e-30, np.exp(-0.5 * t) if t < 12 else 1e-30]) for t in times]
        fitted = certification._fit_exponents(list(times), samples, 1e-20)
        assert fitted[0] == pytest.approx(0.3, rel=1e-9)
        assert fitted[1] is None
        assert fitted[2] == pytest.approx(0.5, rel=1e-9)

    def test_floor_covers_the_stalled_state(self, p_star, bundle):
        # the state RK4 settles at lies within the resolution radius of E3
        fb = bundle.as_float()
        slow, _ = anchor_rates(p_star, State(0.8, 0.6))
        r = state_resolution(State(0.8, 0.6), slow, 1e-3)
        assert v_noise(fb, r, 0.0) >= fb.delta2 * (np.finfo(float).eps / (1e-3 * slow)) ** 2


class TestDiscrete:
    def test_reference_set(self, p_star_exact):
        report = discrete_vs_continuous(p_star_exact)
        assert report.ok
        assert report.max_residual == 0.0
        assert report.excluded == []
        origin = next(pt for pt in report.points if pt.kind == EquilibriumKind.ORIGIN)
        assert origin.multipliers[0] == pytest.approx(5 / 3, rel=1e-15)
        assert origin.multipliers[1] == pytest.approx(5 / 2, rel=1e-15)

    def test_inadmissible_e3_is_excluded(self):
        p = ModelParams.exact(a=1, nu=1, gamma=1, theta1=1, theta2=1, L1=2, L2=1)
        report = discrete_vs_continuous(p)
        assert report.excluded == [EquilibriumKind.CONJECTURAL]
        assert len(report.points) == 3

    def test_float_draws(self, admissible_params):
        for p in admissible_params:
            assert discrete_vs_continuous(p).ok


class TestSuiteOptions:
    def test_defaults(self):
        o = SuiteOptions()
        assert o.suite == list(SUITES)
        assert (o.draws, o.samples, o.pairs, o.t_end, o.gap_t_end) == (100, 100, 100, 50.0, 1.0)
        assert o.param_sets == 10
        assert o.dt is None and o.kappa is None and o.eta is None

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(suite=["decay", "bogus"]),
            dict(suite=[]),
            dict(eta=1.0),
            dict(kappa=0.0),
            dict(dt=-1e-3),
            dict(t_end=float("inf")),
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ValidationError):
            SuiteOptions(**kwargs)


class TestRunSuite:
    def test_fast_checks_pass(self, p_star):
        options = SuiteOptions(suite=["classification", "traces", "discrete", "jacobian", "convergence"], draws=5)
        checks = run_suite(p_star, options, seed=11)
        assert [c.name for c in checks] == options.suite
        assert all(c.status == "pass" for c in checks), checks
        discrete = _by_name(checks)["discrete"]
        assert discrete.measured["origin_multiplier_1"] == pytest.approx(5 / 3)
        assert discrete.measured["origin_multiplier_2"] == pytest.approx(5 / 2)
        assert abs(_by_name(checks)["convergence"].measured["order"] - 4.0) <= 0.3
        assert _by_name(checks)["classification"].measured["near_degenerate_rejected"] == 0

    def test_dynamic_checks_pass(self, p_star):
        options = SuiteOptions(
            suite=["envelopes", "invariance", "liapunov", "decay", "uniqueness"],
            samples=5, pairs=5, param_sets=2, t_end=5.0, dt=1e-3,
        )
        checks = _by_name(run_suite(p_star, options, seed=3))
        for name in options.suite:
            assert checks[name].status == "pass", checks[name]
        assert checks["liapunov"].measured["global_ok"] is False
        assert checks["uniqueness"].measured["zero_separation_gap"] == 0.0

    def test_decay_covers_drawn_parameter_sets(self, p_star):
        options = SuiteOptions(suite=["decay"], samples=3, param_sets=2, t_end=5.0, dt=1e-2)
        check = run_suite(p_star, options, seed=4)[0]
        assert check.status == "pass", check
        assert check.measured["parameter_sets"] == 3
        assert check.measured["samples"] == 9
        assert check.measured["non_monotone"] == 0

    def test_liapunov_derivative_on_drawn_sets(self):
        options = SuiteOptions(suite=["liapunov"], samples=20)
        for q in sample_admissible(np.random.default_rng(123), 12):
            check = run_suite(q, options, seed=9)[0]
            assert check.status == "pass", (q, check)
            assert check.measured["vdot_max_relative_error"] <= 1e-6

    def test_deterministic_and_independent_of_selection(self, p_star):
        options = SuiteOptions(suite=["traces", "jacobian"], draws=3)
        first = run_suite(p_star, options, seed=5)
        second = run_suite(p_star, options, seed=5)
        assert [c.model_dump() for c in first] == [c.model_dump() for c in second]
        alone = run_suite(p_star, SuiteOptions(suite=["jacobian"], draws=3), seed=5)
        assert alone[0].model_dump() == first[1].model_dump()

    def test_understated_kappa_fails(self, p_star):
        options = SuiteOptions(suite=["uniqueness"], pairs=5, kappa=0.01, dt=1e-3)
        check = run_suite(p_star, options, seed=0)[0]
        assert check.status == "fail"
        assert check.measured["kappa_overridden"] is True
        assert check.measured["max_ratio"] > 1.0

    def test_eta_override_reports_uncertified(self, p_star):
        options = SuiteOptions(suite=["decay"], samples=3, t_end=5.0, dt=1e-2, eta=0.5)
        check = run_suite(p_star, options, seed=0)[0]
        assert check.status == "uncertified"
        assert check.measured["eta_override"] == 0.5

    def test_inadmissible_parameters(self):
        p = ModelParams(a=1.0, nu=1.0, gamma=1.0, theta1=1.0, theta2=1.0, L1=2.0, L2=1.0)
        checks = _by_name(run_suite(p, SuiteOptions(suite=["liapunov", "decay", "classification"], draws=0), seed=0))
        assert checks["liapunov"].status == "uncertified"
        assert checks["decay"].status == "uncertified"
        assert checks["classification"].status == "uncertified"
