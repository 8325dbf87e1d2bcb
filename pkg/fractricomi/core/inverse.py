# fractricomi/core/inverse.py

"""
Recovery of the fractional order alpha from one projection of the solution
at a time t0 > 0.

The observable is E(alpha) = s (e_{lambda,1}(alpha) tau + e_{lambda,2}(alpha) f)
with either a sine projection (lambda = (k0 pi)^2, s = 1/2) or a Fourier
frequency on the line (lambda = xi0^2, s = 1/sqrt(2 pi)). For large t0, E is
strictly monotone in alpha and alpha is found by a bracketing root search.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import rgamma

from .data import Profile
from .direct_bounded import ProblemSpec, build_traces, sine_coefficients
from .direct_line import DEFAULT_WINDOW, fourier_transform
from .errors import (ConvergenceError, DomainError, InvalidSpecError, NotMonotoneError,
                     OutOfRangeError)
from .events import Event, EventLog, emit
from .parallel import parallel_map
from .quadrature import richardson_derivative
from .special_functions import EULER_GAMMA, digamma, e_lambda_1, e_lambda_2, gamma

logger = logging.getLogger(__name__)

MODES = ("bounded", "line")
DEFAULT_SCAN = 33
MIN_SCAN = 17
STRICT_THRESHOLD = 1e-14
DERIVATIVE_STEP = 1e-5
RESIDUAL_TOLERANCE = 1e-12
BRACKET_TOLERANCE = 1e-12
SECANT_SWITCH = 1e-3
MAX_ITERATIONS = 200
# Empirical constant in |d e_{lambda,1} / dalpha| <= C ln t0 / (alpha0 lambda^2 t0^{alpha+1}).
E1_ENVELOPE_CONSTANT = 100.0


@dataclass(frozen=True)
class InverseObservation:
    """
    A single observation d = E(alpha) at time t0.

    Attributes:
        mode: "bounded" (sine projection on mode k0) or "line" (frequency xi0)
        t0: Observation time
        target: Observed value d0 (bounded) or d1 (line)
        alpha0: Lower end of the search interval [alpha0, 1]
        tau_coeff: tau_{k0} or tau_hat(xi0)
        f_coeff: f_{k0} or f_hat(xi0)
        k0: Sine mode, bounded mode only
        xi0: Frequency, line mode only
    """
    mode: str
    t0: float
    target: float
    alpha0: float
    tau_coeff: float
    f_coeff: float
    k0: Optional[int] = None
    xi0: Optional[float] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidSpecError(f"mode must be one of {MODES}, got '{self.mode}'")
        if self.mode == "bounded":
            if self.k0 is None or int(self.k0) != self.k0 or self.k0 < 1:
                raise InvalidSpecError(f"k0 must be a positive integer, got {self.k0}")
        elif self.xi0 is None or not math.isfinite(self.xi0) or self.xi0 == 0:
            raise InvalidSpecError(f"xi0 must be a non-zero real, got {self.xi0}")
        if not self.t0 > 0:
            raise InvalidSpecError(f"t0 must be positive, got {self.t0}")
        if not 0 < self.alpha0 < 1:
            raise InvalidSpecError(f"alpha0 out of (0,1): {self.alpha0}")
        if not math.isfinite(self.target):
            raise InvalidSpecError(f"target must be finite, got {self.target}")
        if self.tau_coeff ** 2 + self.f_coeff ** 2 == 0:
            raise InvalidSpecError("tau_coeff and f_coeff must not both vanish")

    @property
    def eigenvalue(self) -> float:
        if self.mode == "bounded":
            return (self.k0 * math.pi) ** 2
        return float(self.xi0) ** 2

    @property
    def scale(self) -> float:
        # Sine projection: int_0^1 sin^2(k0 pi x) dx = 1/2.
        return 0.5 if self.mode == "bounded" else 1.0 / math.sqrt(2.0 * math.pi)


def _components(obs: InverseObservation, alpha: float) -> Tuple[float, float]:
    lam = obs.eigenvalue
    e1 = e_lambda_1(alpha, obs.t0, lam) if obs.tau_coeff != 0 else 0.0
    e2 = e_lambda_2(alpha, obs.t0, lam) if obs.f_coeff != 0 else 0.0
    return e1, e2


def observable_E(obs: InverseObservation, alpha: float) -> float:
    """
    The observable E(alpha) of an observation.

    Args:
        obs: Observation
        alpha: Order in [alpha0, 1]

    Returns:
        s (e_{lambda,1} tau + e_{lambda,2} f)
    """
    if not obs.alpha0 <= alpha <= 1:
        raise DomainError(f"alpha must lie in [{obs.alpha0}, 1], got {alpha}")
    e1, e2 = _components(obs, alpha)
    return obs.scale * (e1 * obs.tau_coeff + e2 * obs.f_coeff)


def t0_threshold(alpha0: float) -> float:
    """Observation time e^{1 - gamma_E} e^{2 / alpha0} beyond which monotonicity is expected."""
    if not 0 < alpha0 <= 1:
        raise DomainError(f"alpha0 out of (0,1]: {alpha0}")
    return math.exp(1.0 - EULER_GAMMA + 2.0 / alpha0)


def asymptotic_components(alpha: float, t0: float, lam: float) -> Dict[str, float]:
    """
    Leading large-t0 terms of e_{lambda,1}, e_{lambda,2} and of their
    alpha-derivatives.
    """
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha out of (0,1]: {alpha}")
    log_t = math.log(t0)
    lam2 = lam * lam
    g2 = gamma(2.0 - alpha)
    p0 = alpha * (1.0 - alpha) * (log_t - digamma(2.0 - alpha)) + 2.0 * alpha - 1.0
    p11 = -gamma(alpha) * p0 / (lam2 * t0 ** (alpha + 1.0) * g2)
    p12 = (gamma(alpha) * (alpha * digamma(alpha + 1.0) - 1.0) * (1.0 - alpha)
           / (lam2 * t0 ** (alpha + 1.0) * g2))
    q1 = ((1.0 - alpha) * (log_t - digamma(2.0 - alpha)) + 1.0) / (lam2 * t0 ** alpha * g2)
    return {
        "e1": gamma(1.0 + alpha) * float(rgamma(1.0 - alpha)) / (lam2 * t0 ** (alpha + 1.0)),
        "e2": 1.0 / lam - float(rgamma(1.0 - alpha)) / (lam2 * t0 ** alpha),
        "de1": p11 + p12,
        "de2": q1,
    }


def e1_derivative_envelope(alpha: float, t0: float, lam: float, alpha0: float) -> float:
    """Large-t0 bound on |d e_{lambda,1} / dalpha|; meaningful for t0 > 1 only."""
    return E1_ENVELOPE_CONSTANT * math.log(t0) / (alpha0 * lam * lam * t0 ** (alpha + 1.0))


@dataclass
class ScanPoint:
    alpha: float
    value: float
    e1: float
    e2: float
    de1: float
    de2: float
    derivative: float


@dataclass
class ScanReport:
    """
    Observable sampled on a uniform alpha-grid of [alpha0, 1].

    Attributes:
        alphas: Grid
        values: E on the grid
        monotone: Whether consecutive differences share a sign and exceed the strict threshold
        direction: +1 increasing, -1 decreasing, 0 not monotone
        value_range: (min E, max E) on the grid
        derivative_signs: Signs of dE/dalpha on the grid
        e1_derivatives: d e_{lambda,1} / dalpha on the grid
        e2_derivatives: d e_{lambda,2} / dalpha on the grid
        e1_predicted: Leading-order prediction of d e_{lambda,1} / dalpha
        e2_predicted: Leading-order prediction of d e_{lambda,2} / dalpha
        e1_envelope: e1_derivative_envelope on the grid
        within_envelope: Whether every |d e_{lambda,1} / dalpha| stays below the envelope
    """
    alphas: np.ndarray
    values: np.ndarray
    monotone: bool
    direction: int
    value_range: Tuple[float, float]
    derivative_signs: np.ndarray
    e1_derivatives: np.ndarray
    e2_derivatives: np.ndarray
    e1_predicted: np.ndarray
    e2_predicted: np.ndarray
    e1_envelope: np.ndarray
    within_envelope: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alphas.tolist(),
            "E": self.values.tolist(),
            "monotone": self.monotone,
            "direction": self.direction,
            "range": [float(v) for v in self.value_range],
            "derivative_sign": self.derivative_signs.astype(int).tolist(),
            "de1": self.e1_derivatives.tolist(),
            "de2": self.e2_derivatives.tolist(),
            "de1_predicted": self.e1_predicted.tolist(),
            "de2_predicted": self.e2_predicted.tolist(),
            "de1_envelope": self.e1_envelope.tolist(),
            "within_envelope": self.within_envelope,
        }


def _scan_point(obs: InverseObservation, alpha: float) -> ScanPoint:
    lam = obs.eigenvalue

    def derivative(func) -> float:
        return richardson_derivative(lambda a: func(a, obs.t0, lam), alpha, DERIVATIVE_STEP,
                                     lower=obs.alpha0, upper=1.0)
    e1 = e_lambda_1(alpha, obs.t0, lam)
    e2 = e_lambda_2(alpha, obs.t0, lam)
    de1 = derivative(e_lambda_1)
    de2 = derivative(e_lambda_2)
    return ScanPoint(
        alpha=alpha,
        value=obs.scale * (e1 * obs.tau_coeff + e2 * obs.f_coeff),
        e1=e1, e2=e2, de1=de1, de2=de2,
        derivative=obs.scale * (de1 * obs.tau_coeff + de2 * obs.f_coeff),
    )


def _check_grid(grid_m: int):
    if grid_m < MIN_SCAN:
        raise InvalidSpecError(f"scan grid needs at least {MIN_SCAN} points, got {grid_m}")


def monotonicity_scan(obs: InverseObservation, grid_m: int = DEFAULT_SCAN,
                      event_log: Optional[EventLog] = None) -> ScanReport:
    """
    Sample E and the alpha-derivatives of its components on [alpha0, 1].

    Args:
        obs: Observation
        grid_m: Number of grid points
        event_log: Optional event log

    Returns:
        ScanReport; a non-monotone observable is reported, not raised
    """
    _check_grid(grid_m)
    alphas = np.linspace(obs.alpha0, 1.0, grid_m)
    points: List[ScanPoint] = parallel_map(lambda a: _scan_point(obs, a), alphas)

    values = np.array([p.value for p in points])
    diffs = np.diff(values)
    if np.all(diffs > STRICT_THRESHOLD):
        direction = 1
    elif np.all(diffs < -STRICT_THRESHOLD):
        direction = -1
    else:
        direction = 0

    predicted = [asymptotic_components(a, obs.t0, obs.eigenvalue) for a in alphas]
    e1_derivatives = np.array([p.de1 for p in points])
    envelope = np.array([e1_derivative_envelope(a, obs.t0, obs.eigenvalue, obs.alpha0)
                         for a in alphas])
    report = ScanReport(
        alphas=alphas,
        values=values,
        monotone=direction != 0,
        direction=direction,
        value_range=(float(values.min()), float(values.max())),
        derivative_signs=np.sign([p.derivative for p in points]),
        e1_derivatives=e1_derivatives,
        e2_derivatives=np.array([p.de2 for p in points]),
        e1_predicted=np.array([p["de1"] for p in predicted]),
        e2_predicted=np.array([p["de2"] for p in predicted]),
        e1_envelope=envelope,
        within_envelope=bool(np.all(np.abs(e1_derivatives) <= envelope)),
    )
    emit(event_log, Event.scan_completed(grid_m, report.monotone, report.value_range))
    if not report.monotone:
        logger.warning("Observable is not strictly monotone on [%g, 1] at t0=%g",
                       obs.alpha0, obs.t0)
    if not report.within_envelope:
        logger.debug("d e_{lambda,1} / dalpha exceeds its large-t0 envelope at t0=%g", obs.t0)
    return report


@dataclass
class RangeVerdict:
    """Admissibility of the target; margin is its distance inside [lower, upper], negative outside."""
    admissible: bool
    lower: float
    upper: float
    margin: float


def _refine_extreme(obs: InverseObservation, alphas: np.ndarray, index: int,
                    sign: float) -> float:
    """Local search for min (sign=1) or max (sign=-1) of E in the cells around a grid index."""
    a = alphas[max(index - 1, 0)]
    b = alphas[min(index + 1, alphas.size - 1)]
    result = minimize_scalar(lambda v: sign * observable_E(obs, v), bounds=(a, b),
                             method="bounded", options={"xatol": 1e-12})
    best = sign * float(result.fun)
    for endpoint in (a, b):
        value = observable_E(obs, endpoint)
        best = min(best, value) if sign > 0 else max(best, value)
    return best


def check_range(obs: InverseObservation, grid_m: int = DEFAULT_SCAN,
                scan: Optional[ScanReport] = None) -> RangeVerdict:
    """
    Check that the target lies within [min E, max E] on [alpha0, 1].

    Args:
        obs: Observation
        grid_m: Scan grid size
        scan: An existing scan to reuse

    Returns:
        RangeVerdict with the refined range and the margin
    """
    _check_grid(grid_m)
    if scan is None:
        scan = monotonicity_scan(obs, grid_m)
    lower = min(scan.value_range[0],
                _refine_extreme(obs, scan.alphas, int(np.argmin(scan.values)), 1.0))
    upper = max(scan.value_range[1],
                _refine_extreme(obs, scan.alphas, int(np.argmax(scan.values)), -1.0))
    margin = float(min(obs.target - lower, upper - obs.target))
    return RangeVerdict(admissible=bool(margin >= 0), lower=float(lower), upper=float(upper),
                        margin=margin)


@dataclass
class RecoveryResult:
    alpha: float
    iterations: int
    residual: float
    monotone: bool
    value_range: Tuple[float, float]
    history: List[Tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "iterations": self.iterations,
            "residual": self.residual,
            "monotone": self.monotone,
            "range": [float(v) for v in self.value_range],
        }


def recover_alpha(obs: InverseObservation, grid_m: int = DEFAULT_SCAN,
                  event_log: Optional[EventLog] = None) -> RecoveryResult:
    """
    Solve E(alpha) = target on [alpha0, 1].

    Bisection narrows the bracket below SECANT_SWITCH, then Illinois
    regula falsi finishes.

    Args:
        obs: Observation
        grid_m: Size of the monotonicity scan used as gate
        event_log: Optional event log

    Returns:
        RecoveryResult

    Raises:
        NotMonotoneError: E is not strictly monotone on the scan grid
        OutOfRangeError: target outside the range of E
        ConvergenceError: iteration budget exhausted
    """
    scan = monotonicity_scan(obs, grid_m, event_log)
    if not scan.monotone:
        raise NotMonotoneError(
            f"observable is not strictly monotone on [{obs.alpha0}, 1] at t0={obs.t0}; "
            f"increase t0 toward {t0_threshold(obs.alpha0):.6g}")
    verdict = check_range(obs, grid_m, scan)
    if not verdict.admissible:
        raise OutOfRangeError(
            f"target {obs.target!r} outside [{verdict.lower!r}, {verdict.upper!r}]",
            (verdict.lower, verdict.upper))

    tolerance = RESIDUAL_TOLERANCE * max(1.0, abs(obs.target))

    def residual(alpha: float) -> float:
        return observable_E(obs, alpha) - obs.target

    a, b = obs.alpha0, 1.0
    fa, fb = residual(a), residual(b)
    emit(event_log, Event.bracket(a, b))
    history: List[Tuple[float, float]] = []

    def done(alpha: float, value: float, iterations: int) -> RecoveryResult:
        emit(event_log, Event.alpha_recovered(alpha, iterations, abs(value)))
        logger.info("Recovered alpha=%.15g after %d iterations", alpha, iterations)
        return RecoveryResult(alpha=alpha, iterations=iterations, residual=abs(value),
                              monotone=True, value_range=(verdict.lower, verdict.upper),
                              history=history)

    for alpha, value in ((b, fb), (a, fa)):
        if value == 0:
            return done(alpha, value, 0)
    if fa * fb > 0:
        # Endpoint targets admitted by the refined range but missed by rounding.
        alpha, value = (a, fa) if abs(fa) <= abs(fb) else (b, fb)
        if abs(value) <= tolerance:
            return done(alpha, value, 0)
        raise OutOfRangeError(f"target {obs.target!r} is not bracketed by [{a}, 1]",
                              (verdict.lower, verdict.upper))

    side = 0
    for iteration in range(1, MAX_ITERATIONS + 1):
        if b - a > SECANT_SWITCH:
            method = "bisection"
            c = 0.5 * (a + b)
        else:
            method = "regula-falsi"
            c = (a * fb - b * fa) / (fb - fa)
            if not a < c < b:
                c = 0.5 * (a + b)
        fc = residual(c)
        history.append((c, fc))
        emit(event_log, Event.root_iteration(iteration, c, abs(fc), method))

        if fc == 0 or (abs(fc) <= tolerance and b - a <= BRACKET_TOLERANCE):
            return done(c, fc, iteration)
        # Illinois step: halve the end value that survives twice in a row.
        if fc * fb < 0:
            a, fa = c, fc
            if side == 1 and method == "regula-falsi":
                fb *= 0.5
            side = 1
        else:
            b, fb = c, fc
            if side == -1 and method == "regula-falsi":
                fa *= 0.5
            side = -1
        if b - a <= BRACKET_TOLERANCE:
            best = min(((a, residual(a)), (b, residual(b))), key=lambda p: abs(p[1]))
            if abs(best[1]) <= tolerance:
                return done(best[0], best[1], iteration)

    raise ConvergenceError(f"root search did not converge in {MAX_ITERATIONS} iterations")


def observation_from_problem(spec: ProblemSpec, k0: int, t0: float, target: float,
                             alpha0: float) -> InverseObservation:
    """
    Bounded observation whose coefficients are the k0-th sine coefficients of
    the trace (built at spec.alpha) and of the time independent source.
    """
    if not spec.source.time_independent:
        raise InvalidSpecError("the inverse problem needs a time independent source")
    if k0 < 1 or k0 > spec.grid_n // 2:
        raise InvalidSpecError(f"k0 must lie in [1, {spec.grid_n // 2}], got {k0}")
    traces = build_traces(spec)
    tau = sine_coefficients(traces.tau, k0)[k0 - 1]
    f = sine_coefficients(spec.source(spec.grid, 0.0), k0)[k0 - 1]
    return InverseObservation(mode="bounded", k0=k0, t0=t0, target=target, alpha0=alpha0,
                              tau_coeff=float(tau), f_coeff=float(f))


def observation_from_profiles(tau: Profile, source: Profile, xi0: float, t0: float,
                              target: float, alpha0: float,
                              window_L: float = DEFAULT_WINDOW) -> InverseObservation:
    """
    Line observation with tau_hat(xi0) and f_hat(xi0) computed by quadrature.
    """
    tau_hat = fourier_transform(tau, xi0, window_L)
    f_hat = fourier_transform(source, xi0, window_L)
    for name, value in (("tau", tau_hat), ("f", f_hat)):
        if abs(value.imag) > 1e-10 * max(1.0, abs(value)):
            logger.warning("Transform of %s at xi0=%g has imaginary part %.3e; using the real part",
                           name, xi0, value.imag)
    return InverseObservation(mode="line", xi0=xi0, t0=t0, target=target, alpha0=alpha0,
                              tau_coeff=tau_hat.real, f_coeff=f_hat.real)
