import logging
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings as hyp_settings, strategies as st

from duopoly.equilibria import JacobianData, conjectural_equilibrium, jacobian_at
from duopoly.errors import OutsideCertifiedBasin, UnstableAnchor
from duopoly.liapunov import (
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
from duopoly.model import ModelParams, Perturbation, State

F = Fraction

E3 = State(F(4, 5), F(3, 5))
P_EXACT = ModelParams.exact(a=F(1, 2), nu=F(1, 3), gamma=1, theta1=3, theta2=2, L1=3, L2=2)
BUNDLE = build_bundle(jacobian_at(P_EXACT, E3), P_EXACT)

small_fractions = st.fractions(min_value=-2, max_value=2, max_denominator=64)


def _pert(U, V):
    return Perturbation(U, V, E3)


def _rational(x: Fraction) -> sp.Rational:
    return sp.Rational(x.numerator, x.denominator)


@pytest.fixture
def bundle():
    return BUNDLE


class TestBundle:
    def test_reference_constants(self, bundle):
        assert (bundle.alpha1, bundle.alpha2, bundle.alpha3) == (F(3, 5), F(2), F(2, 5))
        assert (bundle.m1, bundle.m2, bundle.m3, bundle.m4) == (F(13, 30), F(1, 5), F(9, 10), F(4, 3))
        assert bundle.M == F(4, 3)
        assert (bundle.delta1, bundle.delta2) == (F(1, 5), F(2))
        assert bundle.h1 == F(8, 25)
        assert bundle.decay_rate == F(16, 25)
        assert not bundle.alpha3_flagged

    def test_h2(self, bundle):
        expected = math.sqrt(2.0) * (4 / 3) / 0.2 ** 1.5
        assert abs(bundle.h2 - expected) <= 1e-10
        assert bundle.h2 == pytest.approx(21.08, abs=5e-3)

    def test_radii(self, bundle):
        assert bundle.radius_sq == F(18, 15625)
        assert bundle.certified_radius_sq == bundle.radius_sq * bundle.delta1 / bundle.delta2
        assert float(bundle.certified_radius_sq) == pytest.approx(1.152e-4, rel=1e-12)
        assert not bundle.global_ok

    def test_unstable_anchor_is_rejected(self):
        with pytest.raises(UnstableAnchor):
            build_bundle(jacobian_at(P_EXACT, State(F(0), F(0))), P_EXACT)
        with pytest.raises(UnstableAnchor):
            build_bundle(jacobian_at(P_EXACT, State(F(0), F(1))), P_EXACT)

    def test_symmetric_anchor(self, caplog):
        j = JacobianData(a11=F(-1), a12=F(0), a21=F(0), a22=F(-1), I0=F(-2), A0=F(1), disc=F(0))
        with caplog.at_level(logging.WARNING, logger="duopoly.liapunov.rionero"):
            b = build_bundle(j, P_EXACT)
        assert (b.alpha1, b.alpha2, b.alpha3) == (2, 2, 0)
        assert (b.delta1, b.delta2) == (F(1, 2), F(5, 2))
        assert b.h1 == F(4, 5)
        assert b.alpha3_flagged
        assert "alpha3" in caplog.text

    def test_as_float(self, bundle):
        fb = bundle.as_float()
        assert isinstance(fb.alpha1, float) and isinstance(fb.jac.A0, float)
        assert fb.radius_sq == pytest.approx(1.152e-3, rel=1e-12)
        assert fb.global_ok is False

    def test_random_draws_have_positive_constants(self, admissible_params):
        for p in admissible_params:
            b = build_bundle(jacobian_at(p, conjectural_equilibrium(p)), p)
            assert b.delta1 > 0 and b.delta2 > b.delta1
            assert b.h1 > 0 and b.h2 > 0
            assert 0 < b.certified_radius_sq < b.radius_sq


class TestLiapunovFunction:
    def test_reference_values(self, bundle):
        assert liapunov_v(bundle, _pert(F(1), F(0))) == F(3, 10)
        assert liapunov_v(bundle, _pert(F(0), F(1))) == F(1)
        assert liapunov_v(bundle, _pert(F(0), F(0))) == 0

    @pytest.mark.parametrize("eps", [F(1, 10), F(1, 100), F(-1, 50)])
    def test_vdot_along_u_axis(self, bundle, eps):
        expected = -F(16, 25) * eps ** 2 - F(9, 10) * eps ** 3
        assert liapunov_vdot(bundle, _pert(eps, F(0)), P_EXACT) == expected

    def test_vdot_matches_symbolic_chain_rule(self, bundle):
        U, V = sp.symbols("U V")
        j = bundle.jac
        a11, a12, a21, a22, A0 = (_rational(x) for x in (j.a11, j.a12, j.a21, j.a22, j.A0))
        a, nu, gamma, L1, L2 = (_rational(x) for x in (P_EXACT.a, P_EXACT.nu, P_EXACT.gamma, P_EXACT.L1, P_EXACT.L2))

        v_expr = (A0 * (U**2 + V**2) + (a11 * V - a21 * U) ** 2 + (a12 * V - a22 * U) ** 2) / 2
        du = a11 * U + a12 * V - a * gamma * U * V - a * L1 * U**2
        dv = a21 * U + a22 * V - nu * gamma * U * V - nu * L2 * V**2
        vdot_expr = sp.expand(sp.diff(v_expr, U) * du + sp.diff(v_expr, V) * dv)

        for x, y in [(F(1, 3), F(-1, 7)), (F(-2, 5), F(3, 11)), (F(1, 100), F(1, 100)), (F(3, 2), F(0))]:
            got = liapunov_vdot(bundle, _pert(x, y), P_EXACT)
            want = vdot_expr.subs({U: _rational(x), V: _rational(y)})
            assert _rational(got) == want

    @given(U=small_fractions, V=small_fractions)
    @hyp_settings(max_examples=200, deadline=None)
    def test_sandwich(self, U, V):
        pert = _pert(U, V)
        value = liapunov_v(BUNDLE, pert)
        assert BUNDLE.delta1 * pert.norm_sq <= value <= BUNDLE.delta2 * pert.norm_sq

    @given(U=small_fractions, V=small_fractions)
    @hyp_settings(max_examples=200, deadline=None)
    def test_cubic_remainder_bound(self, U, V):
        pert = _pert(U, V)
        remainder = psi(BUNDLE, pert, P_EXACT)
        assert remainder * remainder <= 2 * BUNDLE.M ** 2 * pert.norm_sq ** 3

    @given(U=st.floats(-1.0, 1.0), V=st.floats(-1.0, 1.0))
    @hyp_settings(max_examples=200, deadline=None)
    def test_derivative_inequality(self, U, V):
        fb = BUNDLE.as_float()
        p = P_EXACT.as_float()
        pert = Perturbation(U, V, State(0.8, 0.6))
        value = liapunov_v(fb, pert)
        vdot = liapunov_vdot(fb, pert, p)
        bound = -(fb.h1 - fb.h2 * math.sqrt(value)) * value
        assert vdot <= bound + 1e-12 * max(1.0, abs(bound))


class TestDecay:
    def test_certified_eta(self, bundle):
        h1, h2 = float(bundle.h1), bundle.h2
        assert certified_eta(bundle, (h1 / (2 * h2)) ** 2) == pytest.approx(0.5, rel=1e-12)
        assert certified_eta(bundle, 0) == 0.0
        with pytest.raises(OutsideCertifiedBasin):
            certified_eta(bundle, (h1 / h2) ** 2 * 1.01)
        with pytest.raises(ValueError):
            certified_eta(bundle, -1e-9)

    def test_halving_time(self, bundle):
        v0 = (float(bundle.h1) / (2 * bundle.h2)) ** 2
        t_half = math.log(2) / (0.5 * 0.32)
        assert t_half == pytest.approx(4.332, abs=1e-3)
        assert decay_envelope(v0, bundle, 0.5, t_half) == pytest.approx(v0 / 2, rel=1e-12)
        assert decay_envelope(v0, bundle, 0.5, 0.0) == pytest.approx(v0, rel=1e-15)

    def test_array_times(self, bundle):
        times = np.linspace(0.0, 10.0, 11)
        env = decay_envelope(1e-5, bundle, 0.25, times)
        assert env.shape == (11,)
        assert np.all(np.diff(env) < 0)

    def test_rejects_outside_basin_and_bad_eta(self, bundle):
        with pytest.raises(OutsideCertifiedBasin):
            decay_envelope(1.0, bundle, 0.5, 1.0)
        with pytest.raises(ValueError):
            decay_envelope(1e-6, bundle, 1.0, 1.0)

    def test_envelope_curve_has_no_basin_check(self, bundle):
        assert envelope_curve(1.0, 0.32, 0.5, 0.0) == pytest.approx(1.0)


class TestLocalCondition:
    def test_radius_edges(self, bundle):
        assert local_condition(bundle, Perturbation(math.sqrt(1e-3), 0.0, E3))
        assert not local_condition(bundle, Perturbation(math.sqrt(2e-3), 0.0, E3))

    def test_certified_basin(self, bundle):
        assert in_certified_basin(bundle, _pert(F(0), F(0)))
        inside = math.sqrt(0.9 * float(bundle.certified_radius_sq))
        assert in_certified_basin(bundle, Perturbation(inside, 0.0, E3))
        assert in_certified_basin(bundle, Perturbation(0.0, -inside, E3))
        assert not in_certified_basin(bundle, Perturbation(0.1, 0.0, E3))
