# fractricomi/core/direct_line.py

"""
Direct problem on the half-plane through the unitary Fourier transform

    u(x, t) = (1/sqrt(2 pi)) int e^{i x xi} [Gamma(alpha) t^{alpha-1}
              E_{alpha,alpha}(-xi^2 t^alpha) tau_hat(xi) + Duhamel term] dxi,

truncated to |xi| <= xi_max. Data are smooth and compactly supported inside
the window [-L, L].
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd
from scipy import integrate
from scipy.integrate import IntegrationWarning

from .data import Profile, ZeroProfile
from .direct_bounded import TraceFunctions
from .errors import (DomainError, InvalidSpecError, QuadratureError, TruncationWarning,
                     WindowViolationError)
from .parallel import parallel_map
from .quadrature import PANEL_NODES, left_singular_rule, legendre_panels
from .special_functions import MLParams, gamma, mittag_leffler_array

logger = logging.getLogger(__name__)

WINDOW_TOLERANCE = 1e-8
DECAY_TOLERANCE = 1e-8
QUAD_RELATIVE_FLOOR = 1e-13
DEFAULT_WINDOW = 12.0
DEFAULT_XI_MAX = 12.0
SMALL_ARGUMENT = 1e-2
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _panel_integral(h: Callable, a: float, b: float, weight: str, omega: float,
                    panels: int) -> float:
    nodes, weights = legendre_panels(np.linspace(a, b, panels + 1), PANEL_NODES)
    trig = np.cos if weight == "cos" else np.sin
    return float(np.sum(weights * np.asarray(h(nodes), dtype=float) * trig(omega * nodes)))


def _oscillatory_quad(h: Callable, a: float, b: float, weight: str, omega: float) -> float:
    if omega == 0.0 and weight == "sin":
        return 0.0
    panels = max(8, int(math.ceil((b - a) * (1.0 + omega))))
    # Absolute floor relative to int |h|.
    floor = QUAD_RELATIVE_FLOOR * max(_panel_integral(lambda s: np.abs(h(s)), a, b, "cos", 0.0,
                                                      panels), np.finfo(float).tiny)
    options = dict(epsabs=floor, epsrel=1e-12, limit=400)
    if omega != 0.0:
        options.update(weight=weight, wvar=omega)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, error = integrate.quad(lambda s: float(h(s)), a, b, **options)
    problems = [w for w in caught if issubclass(w.category, IntegrationWarning)]
    if not problems or error <= floor:
        return value

    coarse = _panel_integral(h, a, b, weight, omega, panels)
    fine = _panel_integral(h, a, b, weight, omega, 2 * panels)
    if abs(fine - coarse) > floor:
        raise QuadratureError(f"Fourier quadrature did not converge at xi={omega}: "
                              f"{problems[0].message} (panel rules differ by {abs(fine - coarse):.3e})")
    logger.debug("Fourier quadrature at xi=%g settled by the panel rule", omega)
    return fine


def fourier_transform(h: Profile, xi: float, window_L: float = DEFAULT_WINDOW) -> complex:
    """
    Unitary Fourier transform (1/sqrt(2 pi)) int h(x) e^{-i x xi} dx of a
    function supported in [-L, L].

    Args:
        h: Real profile
        xi: Frequency
        window_L: Truncation half-width L

    Returns:
        The transform, conjugate symmetric in xi
    """
    if not window_L > 0:
        raise DomainError(f"window half-width must be positive, got {window_L}")
    edges = np.abs(h(np.array([-window_L, window_L])))
    if np.max(edges) > WINDOW_TOLERANCE:
        raise WindowViolationError(
            f"data does not vanish at the window edges: |h(+-L)| = {np.max(edges):.3e}")
    a, b = -window_L, window_L
    support = h.support()
    if support is not None:
        a, b = max(a, support[0]), min(b, support[1])
        if a >= b:
            return 0j
    omega = abs(float(xi))
    real = _oscillatory_quad(h, a, b, "cos", omega)
    imag = -_oscillatory_quad(h, a, b, "sin", omega)
    if xi < 0:
        imag = -imag
    return complex(real, imag) / _SQRT_2PI


def transform_samples(h: Profile, xi, window_L: float = DEFAULT_WINDOW) -> np.ndarray:
    """fourier_transform at many frequencies, spread over the worker pool."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if isinstance(h, ZeroProfile):
        return np.zeros(xi.shape, dtype=complex)
    return np.array(parallel_map(lambda v: fourier_transform(h, v, window_L), xi), dtype=complex)


@dataclass(frozen=True, eq=False)
class LineSpec:
    """
    Data of the half-plane problem in frequency space.

    Attributes:
        tau_hat: Transform of the trace, a vectorized function of xi
        f_hat: Transform of the spatial source profile
        window_L: Spatial truncation half-width
        xi_max: Frequency truncation
        alpha: Fractional order in (0, 1]
        source_time: Time factor phi with f_hat(xi, t) = f_hat(xi) phi(t);
            None for a time independent source
        refinement: Panels per frequency panel of width pi / L
    """
    tau_hat: Callable
    f_hat: Callable
    window_L: float
    xi_max: float
    alpha: float
    source_time: Optional[Callable] = None
    refinement: int = 1

    def __post_init__(self):
        if not self.window_L > 0:
            raise InvalidSpecError(f"window_L must be positive, got {self.window_L}")
        if not self.xi_max > 0:
            raise InvalidSpecError(f"xi_max must be positive, got {self.xi_max}")
        if not 0 < self.alpha <= 1:
            raise InvalidSpecError(f"alpha out of (0,1]: {self.alpha}")
        if self.refinement < 1:
            raise InvalidSpecError(f"refinement must be at least 1, got {self.refinement}")

        panels = self.refinement * int(math.ceil(2.0 * self.xi_max * self.window_L / math.pi))
        nodes, weights = legendre_panels(np.linspace(-self.xi_max, self.xi_max, panels + 1),
                                         PANEL_NODES)
        edges = np.array([-self.xi_max, self.xi_max])
        values = np.concatenate((nodes, edges))
        tau = np.asarray(self.tau_hat(values), dtype=complex)
        f = np.asarray(self.f_hat(values), dtype=complex)
        decay = max(np.max(np.abs(tau[-2:])), np.max(np.abs(f[-2:])))
        if decay > DECAY_TOLERANCE:
            raise InvalidSpecError(
                f"transforms have not decayed at xi_max={self.xi_max}: {decay:.3e}")
        for name, value in (("_nodes", nodes), ("_weights", weights),
                            ("_tau_nodes", tau[:-2]), ("_f_nodes", f[:-2]),
                            ("_edges", edges), ("_tau_edges", tau[-2:]), ("_f_edges", f[-2:])):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def time_independent(self) -> bool:
        return self.source_time is None


def line_spec_from_profiles(tau: Profile, source: Profile, alpha: float,
                            window_L: float = DEFAULT_WINDOW, xi_max: float = DEFAULT_XI_MAX,
                            source_time: Optional[Callable] = None,
                            refinement: int = 1) -> LineSpec:
    """
    LineSpec whose transforms are computed from spatial profiles by quadrature.
    """
    def tau_hat(xi):
        return transform_samples(tau, xi, window_L)

    def f_hat(xi):
        return transform_samples(source, xi, window_L)

    return LineSpec(tau_hat=tau_hat, f_hat=f_hat, window_L=window_L, xi_max=xi_max,
                    alpha=alpha, source_time=source_time, refinement=refinement)


def _duhamel_factor(spec: LineSpec, t: float, xi: np.ndarray) -> np.ndarray:
    """int_0^t eta^{alpha-1} E_{alpha,alpha}(-xi^2 eta^alpha) phi(t - eta) deta per frequency."""
    alpha = spec.alpha
    lam = max(spec.xi_max ** 2, 1.0)
    first = min(t, (SMALL_ARGUMENT / lam) ** (1.0 / alpha))
    eta, weights = left_singular_rule(t, alpha - 1.0, first)
    kernel = mittag_leffler_array(MLParams(alpha, alpha), -(xi[None, :] ** 2) * eta[:, None] ** alpha)
    phi = np.asarray(spec.source_time(t - eta), dtype=float)
    return (weights * phi) @ kernel


def _frequency_bracket(spec: LineSpec, t: float, xi: np.ndarray, tau: np.ndarray,
                       f: np.ndarray) -> np.ndarray:
    alpha = spec.alpha
    z = -(xi ** 2) * t ** alpha
    bracket = gamma(alpha) * t ** (alpha - 1.0) * mittag_leffler_array(MLParams(alpha, alpha), z) * tau
    if np.any(f):
        if spec.time_independent:
            factor = t ** alpha * mittag_leffler_array(MLParams(alpha, alpha + 1.0), z)
        else:
            factor = _duhamel_factor(spec, t, xi)
        bracket = bracket + factor * f
    return bracket


def eval_line_complex(spec: LineSpec, x: float, t: float) -> complex:
    """Truncated inverse transform before taking the real part."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if abs(x) > spec.window_L:
        raise DomainError(f"|x| must not exceed the window {spec.window_L}, got {x}")

    edge_values = _frequency_bracket(spec, t, spec._edges, spec._tau_edges, spec._f_edges)
    edge = float(np.max(np.abs(edge_values))) / _SQRT_2PI
    if edge > DECAY_TOLERANCE:
        message = f"integrand at xi_max={spec.xi_max} is {edge:.3e}; increase xi_max"
        logger.warning(message)
        warnings.warn(message, TruncationWarning)

    bracket = _frequency_bracket(spec, t, spec._nodes, spec._tau_nodes, spec._f_nodes)
    return complex(np.sum(spec._weights * np.exp(1j * x * spec._nodes) * bracket) / _SQRT_2PI)


def eval_line_solution(spec: LineSpec, x: float, t: float) -> float:
    """
    Value of u(x, t) on the parabolic side of the half-plane problem.

    Args:
        spec: Line problem data
        x: Point with |x| <= window_L
        t: Time, t > 0

    Returns:
        Real part of the truncated inverse-transform quadrature
    """
    return eval_line_complex(spec, x, t).real


def line_traces(tau: Profile, alpha: float, grid_n: int = 513) -> TraceFunctions:
    """
    Traces on [0, 1] for the hyperbolic side of the half-plane problem,
    tau from the profile and nu = tau'' / Gamma(1 + alpha).
    """
    if not 0 < alpha <= 1:
        raise InvalidSpecError(f"alpha out of (0,1]: {alpha}")
    x = np.linspace(0.0, 1.0, grid_n)
    gam = gamma(1.0 + alpha)
    zeros = np.zeros_like(x)
    return TraceFunctions(x=x, tau=tau(x), nu=tau.derivative(x, 2) / gam, gamma_const=gam,
                          c1=0.0, c2=0.0, g=zeros, F=zeros, alpha=alpha)


def sample_line_field(spec: LineSpec, xs, ts) -> pd.DataFrame:
    """
    Sample u on a tensor grid of the parabolic side.

    Returns:
        DataFrame with columns x, t, u, region
    """
    px, pt = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(ts, dtype=float))
    px, pt = px.ravel(), pt.ravel()
    values = parallel_map(lambda p: eval_line_solution(spec, p[0], p[1]), list(zip(px, pt)))
    return pd.DataFrame({"x": px, "t": pt, "u": values, "region": "parabolic"})
