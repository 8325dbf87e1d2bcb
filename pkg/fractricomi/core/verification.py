# fractricomi/core/verification.py

"""
Residual checks for a bounded series solution: gluing along t = 0, boundary
and characteristic conditions, and the two equations in their regions.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .direct_bounded import (SpectralSolution, _weighted_modes, _weighted_tail,
                             eval_hyperbolic, eval_hyperbolic_rate, eval_parabolic_points,
                             eval_weighted_rate, functional_relation_residuals)
from .events import Event, EventLog, emit
from .parallel import parallel_map
from .quadrature import extrapolate_to_zero, left_singular_rule, right_singular_panel
from .special_functions import gamma

logger = logging.getLogger(__name__)

TOLERANCES: Dict[str, float] = {
    "gl1": 1e-3,
    "gl2": 1e-3,
    "boundary": 1e-9,
    "characteristic": 1e-4,
    "wave": 1e-4,
    "subdiffusion": 1e-3,
    "first_relation": 1e-4,
    "second_relation": 1e-5,
}

WAVE_STEP = 1e-3
RL_STEP = 0.02
RL_SMALL_ARGUMENT = 1e-2
RL_JACOBI_NODES = 24


@dataclass(frozen=True)
class ReportGrid:
    """
    Where the residuals are sampled.

    Attributes:
        points: Number of x-points for the gluing, boundary and characteristic checks
        samples: Number of random points for each equation residual
        seed: Seed of the random point sampler
        epsilons: Offsets approaching t = 0; on the parabolic side they are
            values of the scaled variable lambda_N t^alpha
    """
    points: int = 33
    samples: int = 20
    seed: int = 0
    epsilons: Tuple[float, ...] = (1e-3, 1e-4, 1e-5)


@dataclass(frozen=True)
class ResidualReport:
    """Max-norm residuals of a series solution; None marks a skipped check."""
    gl1: float
    gl2: float
    boundary: float
    characteristic: float
    wave: float
    subdiffusion: Optional[float]
    first_relation: float
    second_relation: float
    reconstruction: float
    tail_estimate: float
    nu_endpoints: Tuple[float, float]
    weighted_rate_gap: Optional[float]

    def checks(self) -> Dict[str, Optional[float]]:
        return {name: getattr(self, name) for name in TOLERANCES}

    def passed(self) -> bool:
        return all(value is None or value <= TOLERANCES[name]
                   for name, value in self.checks().items())

    def to_dict(self) -> dict:
        out = asdict(self)
        out["nu_endpoints"] = [float(v) for v in self.nu_endpoints]
        out["passed"] = self.passed()
        return out


def _report_points(sol: SpectralSolution, grid: ReportGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Grid indices (and abscissae) kept away from both ends."""
    x = sol.traces.x
    n = x.size
    margin = max(grid.epsilons)
    idx = np.unique(np.round(np.linspace(2, n - 3, grid.points)).astype(int))
    idx = idx[(x[idx] >= margin) & (x[idx] <= 1.0 - margin)]
    return idx, x[idx]


def _gluing(sol: SpectralSolution, grid: ReportGrid) -> Tuple[float, float]:
    idx, xs = _report_points(sol, grid)
    if xs.size == 0:
        return 0.0, 0.0
    alpha = sol.alpha
    lam_n = sol.eigenvalues[-1]
    eps = np.asarray(grid.epsilons, dtype=float)
    source = sol.spec.source

    t_plus = (eps / lam_n) ** (1.0 / alpha)
    weighted = np.array([eval_parabolic_points(sol, xs, t, weighted=True) for t in t_plus])
    upper = np.array([extrapolate_to_zero(eps, weighted[:, i]) for i in range(xs.size)])

    def lower_limits(x):
        values = [eval_hyperbolic(sol.traces, source, x, -e) for e in eps]
        rates = [eval_hyperbolic_rate(sol.traces, source, x, -e) for e in eps]
        return extrapolate_to_zero(eps, values), extrapolate_to_zero(eps, rates)

    lower = np.array(parallel_map(lower_limits, xs))
    gl1 = float(np.max(np.abs(upper - lower[:, 0])))

    # nu-limit from below against tau'' / Gamma(1 + alpha) from the trace.
    _, d2 = sol.traces.tau_second_difference()
    gl2 = float(np.max(np.abs(lower[:, 1] - d2[idx - 2] / sol.traces.gamma_const)))
    return gl1, gl2


def _boundary(sol: SpectralSolution) -> float:
    ts = sol.spec.horizon * np.linspace(0.05, 1.0, 20)
    left = eval_parabolic_points(sol, np.zeros_like(ts), ts)
    right = eval_parabolic_points(sol, np.ones_like(ts), ts)
    return float(max(np.max(np.abs(left)), np.max(np.abs(right))))


def _characteristic(sol: SpectralSolution, grid: ReportGrid) -> float:
    xs = np.linspace(0.0, 1.0, grid.points)
    values = parallel_map(lambda x: eval_hyperbolic(sol.traces, sol.spec.source, 0.5 * x, -0.5 * x),
                          xs)
    return float(np.max(np.abs(np.asarray(values) - sol.spec.psi(xs))))


def _wave(sol: SpectralSolution, rng: np.random.Generator, samples: int) -> float:
    h = WAVE_STEP
    margin = 3.0 * h
    t = -rng.uniform(margin, 0.5 - margin, samples)
    x = rng.uniform(-t + margin, 1.0 + t - margin)
    source = sol.spec.source

    def residual(point):
        px, pt = point

        def u(a, b):
            return eval_hyperbolic(sol.traces, source, a, b)
        centre = u(px, pt)
        utt = (u(px, pt + h) - 2.0 * centre + u(px, pt - h)) / (h * h)
        uxx = (u(px + h, pt) - 2.0 * centre + u(px - h, pt)) / (h * h)
        return abs(utt - uxx - float(source(px, pt)))

    return float(max(parallel_map(residual, list(zip(x, t)))))


def _rl_rule(alpha: float, scale: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes w and weights for int_0^1 (1 - w^{1/alpha})^{-alpha} v(w) dw with v
    smooth in w and varying on the scale 1 / scale near w = 0.
    """
    smallest = min(0.5, RL_SMALL_ARGUMENT / max(scale, 1e-300))
    w0, c0 = left_singular_rule(0.5, 0.0, smallest)
    c0 = c0 * (1.0 - w0 ** (1.0 / alpha)) ** -alpha
    w1, c1 = right_singular_panel(0.5, 1.0, -alpha, RL_JACOBI_NODES)
    c1 = c1 * ((1.0 - w1) / (1.0 - w1 ** (1.0 / alpha))) ** alpha
    return np.concatenate((w0, w1)), np.concatenate((c0, c1))


def _subdiffusion_residual(sol: SpectralSolution, x: float, t: float) -> float:
    """
    |d^alpha u - u_xx - f| at (x, t) mode by mode, with the Riemann-Liouville
    derivative d/dt J(t), J = (1/Gamma(1-alpha)) int_0^t (t-s)^{-alpha} u(s) ds.

    Substituting s = t w^{1/alpha} turns J into
    (1/(alpha Gamma(1-alpha))) int_0^1 (1 - w^{1/alpha})^{-alpha} v(t w^{1/alpha}) dw
    with v = s^{1-alpha} u the weighted solution.
    """
    alpha = sol.alpha
    lam = sol.eigenvalues
    h = RL_STEP * t
    stencil = t + h * np.array([-2.0, -1.0, 1.0, 2.0])
    if alpha == 1.0:
        modes = _weighted_modes(sol, stencil)
    else:
        nodes, weights = _rl_rule(alpha, lam[-1] * stencil[0] ** alpha)
        s = stencil[:, None] * nodes[None, :] ** (1.0 / alpha)
        v = _weighted_modes(sol, s.ravel()).reshape(s.shape + (lam.size,))
        modes = np.einsum("q,iqn->in", weights, v) / (alpha * gamma(1.0 - alpha))
    rate = (modes[0] - 8.0 * modes[1] + 8.0 * modes[2] - modes[3]) / (12.0 * h)

    y = _weighted_modes(sol, np.array([t]))[0] * t ** (alpha - 1.0)
    f_k = sol.f_k if sol.f_k is not None else 0.0
    basis = np.sin(math.pi * x * sol.modes)
    return float(abs(np.sum(basis * (rate + lam * y - f_k))))


def _subdiffusion(sol: SpectralSolution, rng: np.random.Generator, samples: int) -> Optional[float]:
    t = sol.spec.horizon * rng.uniform(0.05, 1.0, samples)
    x = rng.uniform(0.05, 0.95, samples)
    if sol.f_k is None:
        logger.info("Subdiffusion residual skipped for a time-dependent source")
        return None
    residuals = parallel_map(lambda p: _subdiffusion_residual(sol, p[0], p[1]), list(zip(x, t)))
    return float(max(residuals))


def _weighted_rate_gap(sol: SpectralSolution, grid: ReportGrid) -> Optional[float]:
    if sol.f_k is None:
        return None
    idx, xs = _report_points(sol, grid)
    if xs.size == 0:
        return None
    eps = np.asarray(grid.epsilons, dtype=float)
    t = (eps / sol.eigenvalues[-1]) ** (1.0 / sol.alpha)
    rates = np.array([eval_weighted_rate(sol, xs, ti) for ti in t])
    limit = np.array([extrapolate_to_zero(eps, rates[:, i]) for i in range(xs.size)])
    return float(np.max(np.abs(limit - sol.traces.nu[idx])))


def verify_solution(sol: SpectralSolution, report_grid: Optional[ReportGrid] = None,
                    event_log: Optional[EventLog] = None) -> ResidualReport:
    """
    Compute the residual report of a series solution.

    Args:
        sol: Spectral solution
        report_grid: Sampling of the checks
        event_log: Optional event log receiving one event per check

    Returns:
        ResidualReport; violations are data, not errors
    """
    grid = report_grid or ReportGrid()
    rng = np.random.default_rng(grid.seed)

    gl1, gl2 = _gluing(sol, grid)
    first, second = functional_relation_residuals(sol.traces)
    wave = _wave(sol, rng, grid.samples)
    subdiffusion = _subdiffusion(sol, rng, grid.samples)

    report = ResidualReport(
        gl1=gl1,
        gl2=gl2,
        boundary=_boundary(sol),
        characteristic=_characteristic(sol, grid),
        wave=wave,
        subdiffusion=subdiffusion,
        first_relation=first,
        second_relation=second,
        reconstruction=sol.reconstruction_error,
        tail_estimate=_weighted_tail(sol, sol.spec.horizon) * sol.spec.horizon ** (sol.alpha - 1.0),
        nu_endpoints=(float(sol.traces.nu[0]), float(sol.traces.nu[-1])),
        weighted_rate_gap=_weighted_rate_gap(sol, grid),
    )

    for name, value in report.checks().items():
        if value is None:
            continue
        emit(event_log, Event.residual_checked(name, value, TOLERANCES[name]))
        if value > TOLERANCES[name]:
            logger.warning("Residual %s = %.3e exceeds %.1e", name, value, TOLERANCES[name])
    return report
