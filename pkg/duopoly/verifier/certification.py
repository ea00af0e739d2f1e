"""Runnable certifications: Liapunov decay, discrete/continuous consistency and the full suite."""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from duopoly.config import settings
from duopoly.equilibria.critical import (
    EquilibriumKind,
    Classification,
    analyze_equilibria,
    closed_form_traces,
    conjectural_equilibrium,
    critical_points,
    e3_admissible,
    finite_difference_jacobian,
    jacobian_at,
)
from duopoly.errors import DegenerateEquilibrium, UnstableAnchor
from duopoly.integrator.absorbing import AbsorbingRect, check_envelopes, check_positive_invariance
from duopoly.integrator.runge_kutta import convergence_order, rk4_step, stream_rk4
from duopoly.liapunov.rionero import LiapunovBundle, build_bundle, liapunov_v, liapunov_vdot, psi
from duopoly.model.core import ModelParams, Perturbation, State, discrete_step
from duopoly.reports import CheckOut
from duopoly.verifier.sampling import basin_perturbations, draw_admissible, sample_admissible
from duopoly.verifier.uniqueness import RATIO_SLACK, kappa_bound, random_pairs, uniqueness_batch

logger = logging.getLogger(__name__)

SUITES = (
    "classification",
    "traces",
    "envelopes",
    "invariance",
    "liapunov",
    "decay",
    "uniqueness",
    "discrete",
    "jacobian",
    "convergence",
)

# state resolution near the anchor, in ulps of its largest coordinate
ROUNDOFF_ULPS = 10.0
# exponent fit ignores V below this multiple of the noise floor
FIT_NOISE_RATIO = 1e4
FIT_POINTS = 256

TRACE_TOL = 1e-12
FIXED_POINT_TOL = 1e-12
JACOBIAN_TOL = 1e-5
ORDER_TOL = 0.3
VDOT_TOL = 1e-6
ALGEBRA_SLACK = 1e-12


@dataclass
class DecayReport:
    s0: State
    status: str
    V0: float
    eta: Optional[float]
    local_ok: bool
    max_excess: float
    monotone: bool
    empirical_exponent: Optional[float]
    predicted_exponent: Optional[float]


def anchor_rates(p: ModelParams, anchor: State) -> Tuple[float, float]:
    """(slowest decay rate, largest eigenvalue modulus) of the Jacobian at ``anchor``."""
    eig = np.linalg.eigvals(jacobian_at(p.as_float(), anchor).matrix())
    return float(np.min(np.abs(eig.real))), float(np.max(np.abs(eig)))


def state_resolution(anchor: State, slow_rate: float, dt: float) -> float:
    """
    Distance from the anchor below which fixed-step RK4 cannot resolve the state.

    Near the anchor an RK4 increment of dt * slow_rate * r is lost to rounding once it
    drops under half an ulp of the anchor's largest coordinate, so the numerical
    trajectory stalls at r of order eps * scale / (dt * slow_rate).

    Args:
        anchor: Equilibrium the trajectories approach
        slow_rate: Smallest |Re lambda| at the anchor
        dt: Integration step

    Returns:
        Resolution radius in state units
    """
    scale = max(1.0, abs(anchor.u), abs(anchor.v))
    stall = 1.0 / (dt * slow_rate) if slow_rate > 0 else math.inf
    return ROUNDOFF_ULPS * np.finfo(float).eps * scale * max(1.0, stall)


def v_noise(bundle: LiapunovBundle, resolution: float, V):
    """Largest change in V caused by moving the state by ``resolution``.

    With V between delta1 |p|^2 and delta2 |p|^2, a shift of size eps changes V by at
    most delta2 * eps * (2 |p| + eps) and |p| <= sqrt(V / delta1).
    """
    r = np.sqrt(np.maximum(V, 0.0) / bundle.delta1)
    return bundle.delta2 * resolution * (2.0 * r + resolution)


def _fit_exponents(times: List[float], samples: List[np.ndarray], floor: float) -> List[Optional[float]]:
    """Per-column decay exponent from a linear fit of log V; values at or under ``floor`` are dropped."""
    if not samples:
        return []
    t = np.asarray(times)
    values = np.stack(samples)
    exponents = []
    for column in values.T:
        use = column > floor
        if np.count_nonzero(use) < 2:
            exponents.append(None)
            continue
        slope, _ = np.polyfit(t[use], np.log(column[use]), 1)
        exponents.append(-float(slope))
    return exponents


def decay_batch(
    p: ModelParams,
    bundle: LiapunovBundle,
    starts: np.ndarray,
    t_end: float,
    dt: float = None,
    eta: Optional[float] = None,
) -> List[DecayReport]:
    """
    Track V along trajectories from ``starts`` (shape (N, 2)) toward E3.

    A certified start must keep V(t) <= V(0) exp(-(1 - eta) h1 t) (1 + decay_slack)
    and V non-increasing from sample to sample, each up to the roundoff of V at the
    anchor's state resolution. A start with h2 sqrt(V(0)) >= h1, or any run with an
    ``eta`` override, is "uncertified" and neither property is asserted. The
    empirical exponent is the fitted slope of log V over at most FIT_POINTS samples
    after the first transient_fraction of the run.

    Args:
        p: Model parameters
        bundle: Liapunov bundle at E3
        starts: Initial states, shape (N, 2)
        t_end: Integration horizon
        dt: RK4 step (default settings.dt)
        eta: Override for eta; marks every start uncertified

    Returns:
        One DecayReport per start, in input order
    """
    dt = settings.dt if dt is None else dt
    slack = settings.decay_slack
    t_fit = settings.transient_fraction * t_end
    pf = p.as_float()
    fb = bundle.as_float()
    e3 = conjectural_equilibrium(pf)
    anchor = State(float(e3.u), float(e3.v))
    starts = np.asarray(starts, dtype=float)
    n = starts.shape[0]

    slow, fast = anchor_rates(pf, anchor)
    resolution = state_resolution(anchor, slow, dt)
    floor = float(v_noise(fb, resolution, 0.0))
    # one-step RK4 truncation, relative to V
    step_slack = ALGEBRA_SLACK + (fb.delta2 / fb.delta1) * min(1.0, fast * dt) ** 5 / 60.0

    def v_of(y: np.ndarray) -> np.ndarray:
        return liapunov_v(fb, Perturbation(y[0] - anchor.u, y[1] - anchor.v, anchor))

    norm_sq = (starts[:, 0] - anchor.u) ** 2 + (starts[:, 1] - anchor.v) ** 2
    local_ok = norm_sq <= fb.radius_sq
    V0 = v_of(starts.T)
    if eta is None:
        etas = fb.h2 * np.sqrt(V0) / fb.h1
        certified = etas < 1.0
    else:
        etas = np.full(n, float(eta))
        certified = np.zeros(n, dtype=bool)
    rates = np.where(etas < 1.0, (1.0 - etas) * fb.h1, 0.0)

    max_excess = np.zeros(n)
    violated = np.zeros(n, dtype=bool)
    monotone = np.ones(n, dtype=bool)
    previous = V0.copy()
    stride = max(1, int(round(t_end / dt)) // FIT_POINTS)
    fit_times, fit_samples = [], []

    for k, (t, y) in enumerate(stream_rk4(pf, starts.T, t_end, dt)):
        V = v_of(y)
        noise = v_noise(fb, resolution, V)
        envelope = V0 * np.exp(-rates * t)
        resolved = V > noise
        excess = np.where(resolved, (V - envelope) / np.maximum(envelope, floor), 0.0)
        max_excess = np.maximum(max_excess, excess)
        violated |= V > envelope * (1.0 + slack) + noise
        monotone &= V <= previous * (1.0 + step_slack) + noise
        previous = V
        if t >= t_fit and k % stride == 0:
            fit_times.append(t)
            fit_samples.append(V.copy())

    exponents = _fit_exponents(fit_times, fit_samples, FIT_NOISE_RATIO * floor)
    reports = []
    for i in range(n):
        if not certified[i]:
            status = "uncertified"
        elif violated[i] or not monotone[i]:
            status = "fail"
        else:
            status = "pass"
        reports.append(DecayReport(
            s0=State(float(starts[i, 0]), float(starts[i, 1])),
            status=status,
            V0=float(V0[i]),
            eta=float(etas[i]) if etas[i] < 1.0 else None,
            local_ok=bool(local_ok[i]),
            max_excess=float(max_excess[i]),
            monotone=bool(monotone[i]),
            empirical_exponent=exponents[i] if exponents else None,
            predicted_exponent=float(rates[i]) if etas[i] < 1.0 else None,
        ))
    failed = sum(r.status == "fail" for r in reports)
    if failed:
        rising = sum(r.status == "fail" and not r.monotone for r in reports)
        logger.warning(f"Decay failed for {failed} of {n} starts ({rising} with V increasing)")
    return reports


def decay_conformance(
    p: ModelParams,
    s0: State,
    bundle: LiapunovBundle,
    t_end: float,
    dt: float = None,
    eta: Optional[float] = None,
) -> DecayReport:
    """Check the exponential decay of V from one initial state."""
    return decay_batch(p, bundle, np.array([[float(s0.u), float(s0.v)]]), t_end, dt, eta)[0]


@dataclass
class FixedPointCheck:
    """One-step residual, scaled by max(1, |coordinate|), and multipliers at a fixed point."""

    kind: EquilibriumKind
    state: State
    residual: float
    multipliers: Tuple[complex, complex]


@dataclass
class DiscreteReport:
    points: List[FixedPointCheck]
    excluded: List[EquilibriumKind] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(pt.residual for pt in self.points)

    @property
    def ok(self) -> bool:
        return self.max_residual <= FIXED_POINT_TOL


def discrete_vs_continuous(p: ModelParams) -> DiscreteReport:
    """Fixed points of the discrete map against the ODE critical points.

    Multipliers of the one-step linearisation are 1 + lambda for each eigenvalue lambda
    of the continuous Jacobian (which already carries a and nu).
    """
    points, excluded = [], []
    for cp in critical_points(p):
        if cp.state is None or not cp.admissible:
            excluded.append(cp.kind)
            continue
        image = discrete_step(p, cp.state)
        residual = max(
            abs(float(image.u - cp.state.u)) / max(1.0, abs(float(cp.state.u))),
            abs(float(image.v - cp.state.v)) / max(1.0, abs(float(cp.state.v))),
        )
        jac = jacobian_at(p, cp.state)
        if jac.complex_pair:
            roots = np.linalg.eigvals(np.eye(2) + jac.matrix())
            multipliers = (complex(roots[0]), complex(roots[1]))
        else:
            multipliers = (complex(1.0 + jac.lambda1), complex(1.0 + jac.lambda2))
        points.append(FixedPointCheck(cp.kind, cp.state, residual, multipliers))
    return DiscreteReport(points, excluded)


class SuiteOptions(BaseModel):
    """Selection and sample sizes for ``run_suite``."""

    suite: List[str] = list(SUITES)
    draws: int = Field(100, ge=0)
    samples: int = Field(100, ge=1)
    pairs: int = Field(100, ge=1)
    # drawn parameter sets the decay check runs in addition to the configured one
    param_sets: int = Field(10, ge=0)
    t_end: float = Field(50.0, gt=0, allow_inf_nan=False)
    gap_t_end: float = Field(1.0, gt=0, allow_inf_nan=False)
    dt: Optional[float] = Field(None, gt=0, allow_inf_nan=False)
    kappa: Optional[float] = Field(None, gt=0, allow_inf_nan=False)
    eta: Optional[float] = Field(None, ge=0, lt=1)

    @field_validator("suite")
    @classmethod
    def known_suites(cls, v: List[str]) -> List[str]:
        unknown = [name for name in v if name not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s) {', '.join(unknown)}; expected {', '.join(SUITES)}")
        if not v:
            raise ValueError("suite list is empty")
        return v


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _stable_e3(p: ModelParams) -> Optional[Tuple[State, LiapunovBundle]]:
    if not e3_admissible(p):
        return None
    try:
        e3 = conjectural_equilibrium(p)
        return e3, build_bundle(jacobian_at(p, e3), p)
    except (DegenerateEquilibrium, UnstableAnchor) as e:
        logger.info(f"No Liapunov bundle at E3: {e}")
        return None


_EXPECTED = {
    EquilibriumKind.ORIGIN: Classification.UNSTABLE_NODE,
    EquilibriumKind.BOUNDARY_Y: Classification.SADDLE,
    EquilibriumKind.BOUNDARY_X: Classification.SADDLE,
    EquilibriumKind.CONJECTURAL: Classification.STABLE_NODE,
}


def _check_classification(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    draws = draw_admissible(rng, o.draws)
    checked = violations = 0
    for q in [p] + draws.params:
        if not e3_admissible(q):
            continue
        checked += 1
        for r in analyze_equilibria(q):
            if r.classification != _EXPECTED[r.kind] or not r.jacobian.disc > 0:
                violations += 1
                logger.warning(f"{r.kind.value} classified {r.classification} for {q}")
    # set-aside draws only count against the pattern when a discriminant is not positive
    for q in draws.rejected:
        for kind, (I0, A0) in closed_form_traces(q).items():
            if not I0 * I0 - 4 * A0 > 0:
                violations += 1
                logger.warning(f"{kind.value} has discriminant {float(I0 * I0 - 4 * A0):.3g} for {q}")
    if checked == 0:
        return CheckOut(name="classification", status="uncertified", detail="E3 is not admissible")
    return CheckOut(
        name="classification",
        status=_status(violations == 0),
        measured={
            "parameter_sets": checked,
            "violations": violations,
            "near_degenerate_rejected": len(draws.rejected),
        },
        tolerance=settings.degeneracy_tol,
    )


def _relative(x: float, y: float) -> float:
    return abs(x - y) / max(1.0, abs(x), abs(y))


def _check_traces(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    worst = 0.0
    for q in [p] + sample_admissible(rng, o.draws):
        states = {cp.kind: cp.state for cp in critical_points(q)}
        for kind, (I0, A0) in closed_form_traces(q).items():
            j = jacobian_at(q, states[kind])
            worst = max(worst, _relative(float(I0), float(j.I0)), _relative(float(A0), float(j.A0)))
    return CheckOut(
        name="traces",
        status=_status(worst <= TRACE_TOL),
        measured={"max_relative_error": worst},
        tolerance=TRACE_TOL,
    )


def _check_envelopes(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    starts = 5.0 * (1.0 - rng.random((o.samples, 2)))
    report = check_envelopes(p, starts, o.t_end, o.dt)
    return CheckOut(
        name="envelopes",
        status=_status(report.ok),
        measured={
            "samples": report.samples,
            "max_ratio_u": report.max_ratio_u,
            "max_ratio_v": report.max_ratio_v,
            "violations": report.violations,
        },
        tolerance=report.slack,
    )


def _check_invariance(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    rect = AbsorbingRect.from_params(p)
    corners = [
        State(rect.u_max, rect.v_max),
        State(rect.u_max, 1e-3 * rect.v_max),
        State(1e-3 * rect.u_max, rect.v_max),
    ]
    report = check_positive_invariance(
        p, rect, o.samples, o.t_end, o.dt, seed=int(rng.integers(2**31)), extra_starts=corners
    )
    return CheckOut(
        name="invariance",
        status=_status(report.ok),
        measured={"samples": report.samples, "max_excess": report.max_excess, "violations": len(report.violations)},
        tolerance=report.tolerance,
    )


def _check_liapunov(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    stable = _stable_e3(p)
    if stable is None:
        return CheckOut(name="liapunov", status="uncertified", detail="E3 is not an admissible stable node")
    e3, bundle = stable
    pf, fb = p.as_float(), bundle.as_float()
    anchor = State(float(e3.u), float(e3.v))

    scale = max(anchor.u, anchor.v)
    count = 100 * o.samples
    U, V = rng.uniform(-scale, scale, size=(2, count))
    pert = Perturbation(U, V, anchor)
    E = pert.norm_sq
    Vl = liapunov_v(fb, pert)
    sandwich = int(np.sum((Vl < fb.delta1 * E * (1 - ALGEBRA_SLACK)) | (Vl > fb.delta2 * E * (1 + ALGEBRA_SLACK))))
    cubic = int(np.sum(np.abs(psi(fb, pert, pf)) > math.sqrt(2.0) * fb.M * E ** 1.5 * (1 + ALGEBRA_SLACK)))

    # numeric dV/dt along the flow by a centred RK4 step
    # |psi| stays under half the quadratic term there, so dV/dt is bounded away from zero
    psi_radius = 0.5 * fb.decay_rate / (math.sqrt(2.0) * fb.M) if fb.M > 0 else math.inf
    r_max = min(0.01, 0.25 * min(anchor.u, anchor.v), psi_radius)
    k = min(o.samples, 100)
    radius = r_max * rng.uniform(0.5, 1.0, size=k)
    angle = rng.uniform(0.0, 2.0 * np.pi, size=k)
    near = Perturbation(radius * np.cos(angle), radius * np.sin(angle), anchor)
    y = np.stack([anchor.u + near.U, anchor.v + near.V])
    # centred step resolved against the fastest mode at E3
    h = 1e-4 / max(1.0, anchor_rates(pf, anchor)[1])

    def v_of(z: np.ndarray) -> np.ndarray:
        return liapunov_v(fb, Perturbation(z[0] - anchor.u, z[1] - anchor.v, anchor))

    numeric = (v_of(rk4_step(pf, y, h)) - v_of(rk4_step(pf, y, -h))) / (2 * h)
    analytic = liapunov_vdot(fb, near, pf)
    vdot_err = float(np.max(np.abs(numeric - analytic) / np.abs(analytic)))

    ok = sandwich == 0 and cubic == 0 and vdot_err <= VDOT_TOL
    return CheckOut(
        name="liapunov",
        status=_status(ok),
        measured={
            "h1": fb.h1,
            "h2": fb.h2,
            "radius_sq": fb.radius_sq,
            "certified_radius_sq": fb.certified_radius_sq,
            "global_ok": fb.global_ok,
            "alpha3_flagged": fb.alpha3_flagged,
            "sandwich_violations": sandwich,
            "cubic_violations": cubic,
            "vdot_max_relative_error": vdot_err,
        },
        tolerance=VDOT_TOL,
    )


def _check_decay(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    stable = _stable_e3(p)
    if stable is None:
        return CheckOut(name="decay", status="uncertified", detail="E3 is not an admissible stable node")
    runs = [(p, stable)]
    for q in sample_admissible(rng, o.param_sets):
        drawn = _stable_e3(q)
        if drawn is not None:
            runs.append((q, drawn))

    reports: List[DecayReport] = []
    for q, (e3, bundle) in runs:
        starts = basin_perturbations(bundle, e3, o.samples, rng)
        batch = decay_batch(q, bundle, starts, o.t_end, o.dt, eta=o.eta)
        if any(r.status == "fail" for r in batch):
            logger.warning(f"Decay failures under {q}")
        reports.extend(batch)

    failed = sum(r.status == "fail" for r in reports)
    uncertified = sum(r.status == "uncertified" for r in reports)
    margins = [
        r.empirical_exponent - r.predicted_exponent
        for r in reports
        if r.empirical_exponent is not None and r.predicted_exponent is not None
    ]
    if failed:
        status = "fail"
    elif uncertified:
        status = "uncertified"
    else:
        status = "pass"
    return CheckOut(
        name="decay",
        status=status,
        measured={
            "parameter_sets": len(runs),
            "samples": len(reports),
            "failures": failed,
            "non_monotone": sum(r.status == "fail" and not r.monotone for r in reports),
            "uncertified": uncertified,
            "max_excess": max(r.max_excess for r in reports),
            "min_exponent_margin": min(margins) if margins else None,
            "eta_override": o.eta,
        },
        tolerance=settings.decay_slack,
    )


def _check_uniqueness(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    rect = AbsorbingRect.from_params(p)
    starts, deltas = random_pairs(p, o.pairs, rng)
    # an expanding pair near the origin and an identical pair
    near_origin = np.array([[0.1 * rect.u_max, 0.1 * rect.v_max]] * 2)
    step = 1e-3 * min(1.0, 0.05 * min(rect.u_max, rect.v_max)) / math.sqrt(2.0)
    fixed_deltas = np.array([[step, step], [0.0, 0.0]])
    certificates = uniqueness_batch(
        p, np.vstack([near_origin, starts]), np.vstack([fixed_deltas, deltas]), o.gap_t_end, o.dt, o.kappa
    )
    kappa = certificates[0].kappa
    failed = sum(not c.passed for c in certificates)
    return CheckOut(
        name="uniqueness",
        status=_status(failed == 0),
        measured={
            "pairs": len(certificates),
            "kappa": kappa,
            "kappa_overridden": o.kappa is not None,
            "max_ratio": max(c.max_ratio for c in certificates if c.G0 > 0),
            "zero_separation_gap": certificates[1].observed_max_gap,
            "truncated": sum(c.truncated for c in certificates),
            "contracting": sum(c.contracting for c in certificates if c.G0 > 0),
            "failures": failed,
        },
        tolerance=RATIO_SLACK,
        detail=f"kappa_bound={kappa_bound(p):.17g}",
    )


def _check_discrete(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    main = discrete_vs_continuous(p)
    worst = main.max_residual
    for q in sample_admissible(rng, o.draws):
        worst = max(worst, discrete_vs_continuous(q).max_residual)
    origin = next(pt for pt in main.points if pt.kind == EquilibriumKind.ORIGIN)
    return CheckOut(
        name="discrete",
        status=_status(worst <= FIXED_POINT_TOL),
        measured={
            "fixed_points": len(main.points),
            "max_residual": worst,
            "origin_multiplier_1": origin.multipliers[0].real,
            "origin_multiplier_2": origin.multipliers[1].real,
        },
        tolerance=FIXED_POINT_TOL,
    )


def _check_jacobian(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    worst = 0.0
    for q in [p] + sample_admissible(rng, o.draws):
        rect = AbsorbingRect.from_params(q)
        states = [cp.state for cp in critical_points(q) if cp.state is not None]
        states.append(State(*(rng.uniform(0.0, 1.0, size=2) * [rect.u_max, rect.v_max])))
        for s in states:
            analytic = jacobian_at(q.as_float(), s).matrix()
            fd = finite_difference_jacobian(q, s)
            worst = max(worst, float(np.max(np.abs(fd - analytic)) / max(1.0, float(np.max(np.abs(analytic))))))
    return CheckOut(
        name="jacobian",
        status=_status(worst <= JACOBIAN_TOL),
        measured={"max_relative_error": worst},
        tolerance=JACOBIAN_TOL,
    )


def _check_convergence(p: ModelParams, o: SuiteOptions, rng: np.random.Generator) -> CheckOut:
    pf = p.as_float()
    tau = 1.0 / max(pf.a * pf.theta1, pf.nu * pf.theta2)
    rect = AbsorbingRect.from_params(pf)
    s0 = State(1.5 * rect.u_max, 0.5 * rect.v_max)
    dts = [tau * f for f in (0.1, 0.05, 0.025, 0.0125)]
    order = convergence_order(pf, s0, 2.0 * tau, dts)
    return CheckOut(
        name="convergence",
        status=_status(abs(order - 4.0) <= ORDER_TOL),
        measured={"order": order},
        tolerance=ORDER_TOL,
    )


_CHECKS: Dict[str, Callable[[ModelParams, SuiteOptions, np.random.Generator], CheckOut]] = {
    "classification": _check_classification,
    "traces": _check_traces,
    "envelopes": _check_envelopes,
    "invariance": _check_invariance,
    "liapunov": _check_liapunov,
    "decay": _check_decay,
    "uniqueness": _check_uniqueness,
    "discrete": _check_discrete,
    "jacobian": _check_jacobian,
    "convergence": _check_convergence,
}


def run_suite(p: ModelParams, options: SuiteOptions, seed: int) -> List[CheckOut]:
    """Run the selected checks in the order given.

    Each check draws from its own generator seeded by (seed, check index), so results
    do not depend on which other checks are selected.
    """
    results = []
    for name in options.suite:
        rng = np.random.default_rng([seed, SUITES.index(name)])
        logger.info(f"Running {name} check")
        result = _CHECKS[name](p, options, rng)
        if result.status == "fail":
            logger.warning(f"Check {name} failed: {result.measured}")
        results.append(result)
    return results
