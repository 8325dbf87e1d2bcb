# fractricomi/core/direct_bounded.py

"""
Direct problem on the bounded domain.

The solution is glued along t = 0 from two pieces:

- in the parabolic region (0 < x < 1, t > 0) the truncated sine series
  u = sum_k [Gamma(alpha) t^{alpha-1} E_{alpha,alpha}(-lambda_k t^alpha) tau_k
             + Duhamel term of f_k] sin(k pi x),  lambda_k = (k pi)^2;
- in the hyperbolic region (the characteristic triangle t < 0, x + t >= 0,
  x - t <= 1) the d'Alembert formula built from the traces tau and nu.

The traces follow from the characteristic data psi and the source f through
g = 2 psi - F and the boundary value problem tau'' - gamma tau' = -gamma g',
tau(0) = tau(1) = 0, gamma = Gamma(1 + alpha), solved in closed form.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import fft, integrate
from scipy.integrate import IntegrationWarning
from scipy.interpolate import CubicSpline

from .data import Profile, Source, ZeroSource
from .errors import (AliasingError, DomainError, InvalidSpecError, OutOfRegionError,
                     QuadratureError, ResidualViolationError)
from .events import Event, EventLog, emit
from .parallel import parallel_map
from .quadrature import GL_NODES, gauss_legendre, left_singular_rule
from .special_functions import ML_DECAY_CONSTANT, MLParams, gamma, mittag_leffler_array

logger = logging.getLogger(__name__)

DEFAULT_MODES = 64
DEFAULT_GRID = 513
DEFAULT_HORIZON = 1.0
MIN_GRID = 9
BOUNDARY_TOLERANCE = 1e-10
TRACE_END_TOLERANCE = 1e-9
END_SAMPLE_TOLERANCE = 1e-6
RELATION_TOLERANCE = 1e-5
RECONSTRUCTION_TOLERANCE = 1e-6
REGION_SLACK = 1e-12
# First Duhamel panel ends where lambda_N eta^alpha reaches this value.
SMALL_ARGUMENT = 1e-2


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """
    Data of the bounded mixed problem.

    Attributes:
        psi: Characteristic data on [0, 1], psi(0) = 0
        source: Right-hand side f(x, t), vanishing at x = 0 and x = 1
        alpha: Fractional order in (0, 1]
        grid_n: Number of spatial grid points
        modes_N: Number of sine modes kept in the series
        horizon: Largest time sampled on the parabolic side
    """
    psi: Profile
    source: Source
    alpha: float
    grid_n: int = DEFAULT_GRID
    modes_N: int = DEFAULT_MODES
    horizon: float = DEFAULT_HORIZON

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InvalidSpecError(f"alpha out of (0,1]: {self.alpha}")
        if self.modes_N < 1:
            raise InvalidSpecError(f"modes_N must be at least 1, got {self.modes_N}")
        if self.grid_n < MIN_GRID:
            raise InvalidSpecError(f"grid_n must be at least {MIN_GRID}, got {self.grid_n}")
        if not self.horizon > 0:
            raise InvalidSpecError(f"horizon must be positive, got {self.horizon}")

        support = self.psi.support()
        if support is not None and (support[0] > 0 or support[1] < 1):
            raise InvalidSpecError(f"psi data must cover [0, 1], got {support}")
        psi0 = float(self.psi(0.0))
        if not math.isfinite(psi0):
            raise InvalidSpecError("psi(0) is not finite")
        if abs(psi0) > BOUNDARY_TOLERANCE:
            raise InvalidSpecError(f"psi(0) must vanish, got {psi0}")

        t = np.linspace(-0.5, self.horizon, 17)
        edge = max(np.max(np.abs(self.source(0.0, t))), np.max(np.abs(self.source(1.0, t))))
        if edge > BOUNDARY_TOLERANCE:
            raise InvalidSpecError(f"source must vanish at x=0 and x=1, found {edge:.3e}")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_n)

    @property
    def gamma_const(self) -> float:
        return gamma(1.0 + self.alpha)


@dataclass(frozen=True, eq=False)
class TraceFunctions:
    """
    Traces tau(x) = lim t^{1-alpha} u(x, t) and nu(x) on the x-grid, with the
    constants of their construction. Off-grid values come from C2 cubic splines.
    """
    x: np.ndarray
    tau: np.ndarray
    nu: np.ndarray
    gamma_const: float
    c1: float
    c2: float
    g: np.ndarray
    F: np.ndarray
    alpha: float
    relation_residual: float = 0.0

    def __post_init__(self):
        for name in ("x", "tau", "nu", "g", "F"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        tau_spline = CubicSpline(self.x, self.tau)
        nu_spline = CubicSpline(self.x, self.nu)
        object.__setattr__(self, "_tau_spline", tau_spline)
        object.__setattr__(self, "_nu_spline", nu_spline)
        object.__setattr__(self, "_nu_antiderivative", nu_spline.antiderivative())

    def tau_at(self, x, order: int = 0) -> np.ndarray:
        return self._tau_spline(x, order)

    def nu_at(self, x) -> np.ndarray:
        return self._nu_spline(x)

    def nu_primitive(self, x) -> np.ndarray:
        """Antiderivative N of nu with N(x[0]) = 0."""
        return self._nu_antiderivative(x)

    def tau_second_difference(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Fourth order central second difference of the tau samples.

        Returns:
            (interior x, tau'' at those points), the two outermost points on
            each side excluded
        """
        h = self.x[1] - self.x[0]
        t = self.tau
        d2 = (-t[:-4] + 16.0 * t[1:-3] - 30.0 * t[2:-2] + 16.0 * t[3:-1] - t[4:]) / (12.0 * h * h)
        return self.x[2:-2], d2


class SeriesValue(NamedTuple):
    """A truncated series value with its truncation error bar."""
    value: float
    tail_estimate: float


def _dblquad(func, a, b, gfun, hfun, epsabs: float, epsrel: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, error = integrate.dblquad(func, a, b, gfun, hfun,
                                             epsabs=epsabs, epsrel=epsrel)
        except IntegrationWarning as e:
            raise QuadratureError(f"double integral did not converge: {e}")
    if not math.isfinite(value):
        raise QuadratureError("double integral is not finite")
    return value


def source_integral_F(f: Source, x: float) -> float:
    """
    Double integral of the source over the characteristic triangle,
    F(x) = int_{-x/2}^0 int_{-eta}^{x+eta} f(xi, eta) dxi deta.

    Args:
        f: Source function
        x: Point in [0, 1]

    Returns:
        F(x)
    """
    if not 0 <= x <= 1:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0 or isinstance(f, ZeroSource):
        return 0.0
    return _dblquad(lambda xi, eta: float(f(xi, eta)), -0.5 * x, 0.0,
                    lambda eta: -eta, lambda eta: x + eta,
                    epsabs=1e-14, epsrel=1e-10)


def source_flux(f: Source, x) -> np.ndarray:
    """
    F'(x) = int_{-x/2}^0 f(x + eta, eta) deta, vectorized over x.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(f, ZeroSource):
        return np.zeros_like(x)

    def integrand(s):
        eta = -0.5 * x * s
        return 0.5 * x * f(x + eta, eta)

    value, error = integrate.quad_vec(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12)
    if not np.all(np.isfinite(value)) or error > 1e-9:
        raise QuadratureError(f"source flux quadrature failed (error estimate {error:.3e})")
    return value


def build_traces(spec: ProblemSpec, event_log: Optional[EventLog] = None) -> TraceFunctions:
    """
    Construct the traces tau and nu for the given problem.

    tau = C1 + C2 e^{gamma x} + g - e^{gamma x} I(x) and
    nu = C2 gamma e^{gamma x} - g' - gamma e^{gamma x} I(x) with
    I(x) = int_0^x g'(xi) e^{-gamma xi} dxi, C2 chosen so that tau(1) = 0 and
    C1 = -C2.

    Args:
        spec: Problem data
        event_log: Optional event log

    Returns:
        TraceFunctions on spec.grid
    """
    x = spec.grid
    gam = spec.gamma_const
    h = x[1] - x[0]

    ref_nodes, ref_weights = gauss_legendre(GL_NODES)
    cell_nodes = x[:-1, None] + 0.5 * h * (1.0 + ref_nodes[None, :])
    flux = source_flux(spec.source, np.concatenate((x, cell_nodes.ravel())))
    flux_grid = flux[:x.size]
    flux_nodes = flux[x.size:].reshape(cell_nodes.shape)

    dg_nodes = 2.0 * spec.psi.derivative(cell_nodes, 1) - flux_nodes
    cells = (0.5 * h * ref_weights * dg_nodes * np.exp(-gam * cell_nodes)).sum(axis=1)
    integral = np.concatenate(([0.0], np.cumsum(cells)))

    F = CubicSpline(x, flux_grid).antiderivative()(x)
    F = F - F[0]
    dpsi = spec.psi.derivative(x, 1)
    g = 2.0 * spec.psi(x) - F
    dg = 2.0 * dpsi - flux_grid

    eg = math.exp(gam)
    c2 = (eg * integral[-1] - g[-1]) / (eg - 1.0)
    c1 = -c2
    growth = np.exp(gam * x)
    tau = c1 + c2 * growth + g - growth * integral
    nu = c2 * gam * growth - dg - gam * growth * integral

    if abs(tau[0]) > TRACE_END_TOLERANCE or abs(tau[-1]) > TRACE_END_TOLERANCE:
        raise ResidualViolationError(
            f"trace does not vanish at the ends: tau(0)={tau[0]:.3e}, tau(1)={tau[-1]:.3e}")

    dtau = CubicSpline(x, tau).derivative()(x)
    relation = float(np.max(np.abs(dtau - nu - 2.0 * dpsi + flux_grid)[1:-1]))
    if relation > RELATION_TOLERANCE:
        raise ResidualViolationError(
            f"tau' - nu - 2 psi' + F' = {relation:.3e} exceeds {RELATION_TOLERANCE}; "
            f"refine the grid (grid_n={spec.grid_n})")

    logger.info("Traces built: alpha=%g, C2=%.6g, nu(0)=%.3e, nu(1)=%.3e",
                spec.alpha, c2, nu[0], nu[-1])
    emit(event_log, Event.traces_built(spec.alpha, spec.grid_n, float(c2), relation))
    return TraceFunctions(x=x, tau=tau, nu=nu, gamma_const=gam, c1=float(c1), c2=float(c2),
                          g=g, F=F, alpha=spec.alpha, relation_residual=relation)


def functional_relation_residuals(traces: TraceFunctions) -> Tuple[float, float]:
    """
    Max-norm residuals of nu = tau'' / Gamma(1 + alpha) (fourth order second
    differences) and tau' - nu = 2 psi' - F' on the interior grid.
    """
    xi, d2 = traces.tau_second_difference()
    first = float(np.max(np.abs(traces.nu[2:-2] - d2 / traces.gamma_const))) if xi.size else 0.0
    return first, traces.relation_residual


def sine_coefficients(h, N: int) -> np.ndarray:
    """
    Sine coefficients b_k = 2 int_0^1 h(x) sin(k pi x) dx, k = 1..N, of samples
    on a uniform grid of [0, 1], so that h(x) = sum_k b_k sin(k pi x).

    The trapezoidal rule on the grid is evaluated as a type-I discrete sine
    transform of the interior samples. Leading dimensions are batched.

    Args:
        h: Samples on the grid (last axis), vanishing at both ends
        N: Number of coefficients

    Returns:
        Array of b_1..b_N along the last axis
    """
    h = np.asarray(h, dtype=float)
    n = h.shape[-1]
    if n < 3:
        raise InvalidSpecError(f"at least 3 grid points are needed, got {n}")
    if N < 1:
        raise InvalidSpecError(f"number of modes must be positive, got {N}")
    if N > n / 2:
        raise AliasingError(f"{N} modes need at least {2 * N} grid points, got {n}")
    ends = max(np.max(np.abs(h[..., 0])), np.max(np.abs(h[..., -1])))
    if ends > END_SAMPLE_TOLERANCE:
        raise InvalidSpecError(f"samples must vanish at both ends, found {ends:.3e}")
    M = n - 1
    return fft.dst(h[..., 1:-1], type=1, axis=-1)[..., :N] / M


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    """
    Sine coefficients of the traces and source together with the data they
    came from. For a time-dependent source f_k is None and the coefficients
    are computed on the quadrature nodes that need them.
    """
    tau_k: np.ndarray
    f_k: Optional[np.ndarray]
    spec: ProblemSpec
    traces: TraceFunctions
    tail_tau_k: np.ndarray
    tail_f_k: Optional[np.ndarray]
    reconstruction_error: float

    def __post_init__(self):
        for name in ("tau_k", "f_k", "tail_tau_k", "tail_f_k"):
            value = getattr(self, name)
            if value is not None:
                arr = np.array(value, dtype=float)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)

    @property
    def alpha(self) -> float:
        return self.spec.alpha

    @property
    def modes(self) -> np.ndarray:
        return np.arange(1, self.tau_k.size + 1)

    @property
    def eigenvalues(self) -> np.ndarray:
        return (self.modes * math.pi) ** 2

    @property
    def tail_eigenvalues(self) -> np.ndarray:
        first = self.tau_k.size + 1
        return (np.arange(first, first + self.tail_tau_k.size) * math.pi) ** 2

    def source_coefficients(self, t, count: Optional[int] = None) -> np.ndarray:
        """Sine coefficients f_k(t) of the source, shape (len(t), count)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        count = count or self.tau_k.size
        if self.f_k is not None and count <= self.f_k.size:
            return np.broadcast_to(self.f_k[:count], (t.size, count)).copy()
        x = self.spec.grid
        samples = self.spec.source(x[None, :], t[:, None])
        return sine_coefficients(samples, count)


def build_solution(spec: ProblemSpec, event_log: Optional[EventLog] = None) -> SpectralSolution:
    """
    Build traces and sine coefficients for the series solution.
    """
    N = spec.modes_N
    if N > spec.grid_n / 2:
        raise AliasingError(f"{N} modes need at least {2 * N} grid points, got {spec.grid_n}")
    traces = build_traces(spec, event_log)
    K = max(N, spec.grid_n // 2)

    all_tau = sine_coefficients(traces.tau, K)
    tau_k, tail_tau = all_tau[:N], all_tau[N:]

    f_k = tail_f = None
    if spec.source.time_independent:
        all_f = sine_coefficients(spec.source(spec.grid, 0.0), K)
        f_k, tail_f = all_f[:N], all_f[N:]

    basis = np.sin(math.pi * np.outer(traces.x, np.arange(1, N + 1)))
    reconstruction = float(np.max(np.abs(basis @ tau_k - traces.tau)))
    if reconstruction > RECONSTRUCTION_TOLERANCE:
        logger.warning("Sine series of the trace reproduces it only to %.3e with N=%d",
                       reconstruction, N)

    return SpectralSolution(tau_k=tau_k, f_k=f_k, spec=spec, traces=traces,
                            tail_tau_k=tail_tau, tail_f_k=tail_f,
                            reconstruction_error=reconstruction)


def _duhamel(sol: SpectralSolution, t: float) -> np.ndarray:
    """int_0^t eta^{alpha-1} E_{alpha,alpha}(-lambda_k eta^alpha) f_k(t - eta) deta per mode."""
    if t <= 0:
        return np.zeros(sol.tau_k.size)
    alpha = sol.alpha
    lam = sol.eigenvalues
    first = min(t, (SMALL_ARGUMENT / lam[-1]) ** (1.0 / alpha))
    eta, weights = left_singular_rule(t, alpha - 1.0, first)
    kernel = mittag_leffler_array(MLParams(alpha, alpha), -lam[None, :] * eta[:, None] ** alpha)
    coefficients = sol.source_coefficients(t - eta)
    return weights @ (kernel * coefficients)


def _weighted_modes(sol: SpectralSolution, t: np.ndarray) -> np.ndarray:
    """Temporal factors t^{1-alpha} y_k(t) for t >= 0, shape (len(t), N)."""
    alpha = sol.alpha
    lam = sol.eigenvalues
    t = np.asarray(t, dtype=float)
    z = -lam[None, :] * t[:, None] ** alpha
    out = np.zeros(z.shape)
    if np.any(sol.tau_k):
        out += gamma(alpha) * mittag_leffler_array(MLParams(alpha, alpha), z) * sol.tau_k
    if sol.f_k is not None:
        if np.any(sol.f_k):
            out += t[:, None] * mittag_leffler_array(MLParams(alpha, alpha + 1.0), z) * sol.f_k
    else:
        duhamel = np.array([_duhamel(sol, ti) for ti in t])
        out += t[:, None] ** (1.0 - alpha) * duhamel
    return out


def _weighted_tail(sol: SpectralSolution, t: float) -> float:
    if sol.tail_tau_k.size == 0:
        return 0.0
    alpha = sol.alpha
    bound = ML_DECAY_CONSTANT / (1.0 + sol.tail_eigenvalues * t ** alpha)
    tail = gamma(alpha) * np.sum(np.abs(sol.tail_tau_k) * bound)
    if sol.tail_f_k is not None:
        tail_f = sol.tail_f_k
    else:
        tail_f = sol.source_coefficients(t, sol.tau_k.size + sol.tail_tau_k.size)[0, sol.tau_k.size:]
    return float(tail + t * np.sum(np.abs(tail_f) * bound))


def _check_parabolic_point(x: float, t: float, allow_zero: bool):
    if not 0 <= x <= 1:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if t < 0 or (t == 0 and not allow_zero):
        raise DomainError(f"t must be positive on the parabolic side, got {t}")


def eval_parabolic_points(sol: SpectralSolution, x, t, weighted: bool = False) -> np.ndarray:
    """
    Vectorized series evaluation at matching arrays of points (x_i, t_i).

    With weighted=True the values t^{1-alpha} u are returned, which stay
    finite at t = 0.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x, t = np.broadcast_arrays(x, t)
    unique_t, index = np.unique(t, return_inverse=True)
    factors = _weighted_modes(sol, unique_t)[index]
    basis = np.sin(math.pi * x[:, None] * sol.modes[None, :])
    values = np.sum(factors * basis, axis=1)
    if not weighted and sol.alpha != 1.0:
        values = values * t ** (sol.alpha - 1.0)
    return values


def eval_parabolic(sol: SpectralSolution, x: float, t: float) -> SeriesValue:
    """
    Truncated series value of u(x, t) in the parabolic region.

    Args:
        sol: Spectral solution
        x: Point in [0, 1]
        t: Time, t > 0

    Returns:
        SeriesValue(value, tail_estimate) with the tail bounded through
        |E_{alpha,mu}(-s)| <= C / (1 + s) over the modes the grid resolves
    """
    _check_parabolic_point(x, t, allow_zero=False)
    value = float(eval_parabolic_points(sol, x, t)[0])
    tail = _weighted_tail(sol, t) * t ** (sol.alpha - 1.0)
    return SeriesValue(value, tail)


def eval_parabolic_weighted(sol: SpectralSolution, x: float, t: float) -> SeriesValue:
    """t^{1-alpha} u(x, t) for t >= 0; at t = 0 this is the truncated trace series."""
    _check_parabolic_point(x, t, allow_zero=True)
    value = float(eval_parabolic_points(sol, x, t, weighted=True)[0])
    return SeriesValue(value, _weighted_tail(sol, t))


def eval_weighted_rate(sol: SpectralSolution, x, t) -> np.ndarray:
    """
    t^{1-alpha} (t^{1-alpha} u)_t for a time-independent source, from
    d/dt E_{alpha,alpha}(-lambda t^alpha)
        = t^{-1} [(1 - alpha) E_{alpha,alpha} + E_{alpha,alpha-1}].
    """
    if sol.f_k is None:
        raise InvalidSpecError("the weighted rate is only available for time-independent sources")
    alpha = sol.alpha
    x, t = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)),
                               np.atleast_1d(np.asarray(t, dtype=float)))
    if np.any(t <= 0):
        raise DomainError("the weighted rate needs t > 0")
    lam = sol.eigenvalues
    z = -lam[None, :] * t[:, None] ** alpha
    e_aa = mittag_leffler_array(MLParams(alpha, alpha), z)
    e_am = mittag_leffler_array(MLParams(alpha, alpha - 1.0), z)
    factors = gamma(alpha) * sol.tau_k * t[:, None] ** -alpha * ((1.0 - alpha) * e_aa + e_am)
    if np.any(sol.f_k):
        e_ap = mittag_leffler_array(MLParams(alpha, alpha + 1.0), z)
        factors += sol.f_k * t[:, None] ** (1.0 - alpha) * ((1.0 - alpha) * e_ap + e_aa)
    basis = np.sin(math.pi * x[:, None] * sol.modes[None, :])
    return np.sum(factors * basis, axis=1)


def _check_hyperbolic_point(x: float, t: float):
    if not (t <= 0 and x + t >= -REGION_SLACK and x - t <= 1 + REGION_SLACK):
        raise OutOfRegionError(f"({x}, {t}) is outside the characteristic triangle")


def _hyperbolic_source(f: Source, x: float, t: float) -> float:
    """(1/2) int_t^0 int_{x+t-eta}^{x-t+eta} f(xi, eta) dxi deta."""
    if t == 0 or isinstance(f, ZeroSource):
        return 0.0
    return 0.5 * _dblquad(lambda xi, eta: float(f(xi, eta)), t, 0.0,
                          lambda eta: x + t - eta, lambda eta: x - t + eta,
                          epsabs=1e-14, epsrel=1e-12)


def eval_hyperbolic(traces: TraceFunctions, f: Source, x: float, t: float) -> float:
    """
    d'Alembert value in the characteristic triangle,
    u = (tau(x-t) + tau(x+t))/2 + (1/2) int_{x-t}^{x+t} nu + source term.

    Args:
        traces: Traces tau and nu
        f: Source function
        x: Spatial coordinate
        t: Time, t <= 0 with x + t >= 0 and x - t <= 1

    Returns:
        u(x, t)
    """
    _check_hyperbolic_point(x, t)
    a, b = x + t, x - t
    tau = traces.tau_at(np.array([a, b]))
    primitive = traces.nu_primitive(np.array([a, b]))
    return float(0.5 * (tau[0] + tau[1]) + 0.5 * (primitive[0] - primitive[1])
                 + _hyperbolic_source(f, x, t))


def eval_hyperbolic_rate(traces: TraceFunctions, f: Source, x: float, t: float) -> float:
    """Time derivative u_t of the d'Alembert solution."""
    _check_hyperbolic_point(x, t)
    a, b = x + t, x - t
    dtau = traces.tau_at(np.array([a, b]), 1)
    nu = traces.nu_at(np.array([a, b]))
    value = 0.5 * (dtau[0] - dtau[1]) + 0.5 * (nu[0] + nu[1])
    if t < 0 and not isinstance(f, ZeroSource):
        def integrand(eta):
            return float(f(x - t + eta, eta) + f(x + t - eta, eta))
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            try:
                rate, _ = integrate.quad(integrand, t, 0.0, epsabs=1e-14, epsrel=1e-12)
            except IntegrationWarning as e:
                raise QuadratureError(f"source rate integral did not converge: {e}")
        value -= 0.5 * rate
    return float(value)


def sample_field(sol: SpectralSolution, nx: int = 21, nt: int = 10) -> pd.DataFrame:
    """
    Sample u on both regions.

    Parabolic rows use t = horizon * j / nt, j = 1..nt; hyperbolic rows use
    t = -j / (2 nt), j = 1..nt, at the x-grid points inside the triangle.

    Returns:
        DataFrame with columns x, t, u, region
    """
    xs = np.linspace(0.0, 1.0, nx)
    ts = sol.spec.horizon * np.arange(1, nt + 1) / nt
    px, pt = np.meshgrid(xs, ts)
    px, pt = px.ravel(), pt.ravel()
    parabolic = pd.DataFrame({"x": px, "t": pt,
                              "u": eval_parabolic_points(sol, px, pt),
                              "region": "parabolic"})
    hyperbolic = sample_triangle(sol.traces, sol.spec.source, nx, nt)
    return pd.concat([parabolic, hyperbolic], ignore_index=True)


def sample_triangle(traces: TraceFunctions, f: Source, nx: int = 21, nt: int = 10) -> pd.DataFrame:
    """d'Alembert values at t = -j / (2 nt), j = 1..nt, on the x-grid points inside the triangle."""
    xs = np.linspace(0.0, 1.0, nx)
    points = [(x, -j / (2.0 * nt)) for j in range(1, nt + 1) for x in xs
              if x - j / (2.0 * nt) >= -REGION_SLACK and x + j / (2.0 * nt) <= 1 + REGION_SLACK]
    values = parallel_map(lambda p: eval_hyperbolic(traces, f, p[0], p[1]), points)
    return pd.DataFrame({"x": [p[0] for p in points], "t": [p[1] for p in points],
                         "u": values, "region": "hyperbolic"})
