# fractricomi/core/special_functions.py

"""
Gamma, digamma and the two-parameter Mittag-Leffler function on the real line.

The Mittag-Leffler function E_{rho,mu}(z) = sum_n z^n / Gamma(rho n + mu) is
evaluated by a hybrid scheme. With m = |z|^{1/rho} (the largest Taylor term is
roughly e^m):

- z > 0, or z < 0 with m <= TAYLOR_LIMIT: Taylor series in double precision,
  pairwise summation and a per-term rounding estimate;
- z < 0 with m >= ASYMPTOTIC_LIMIT: the algebraic expansion
  -sum_{n>=1} z^{-n} / Gamma(mu - rho n), optimally truncated, the smallest
  term serving as error estimate;
- everything the two branches cannot certify to ML_TOLERANCE: the Taylor
  series accumulated in extended precision with mpmath. Such arguments in the
  band BAND_LOWER <= m <= BAND_UPPER always go through a cached Chebyshev
  interpolant of the extended series, built on first use; the series itself
  is used only when the trailing coefficients do not certify the tolerance.
"""

import functools
import math
import threading
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from mpmath.ctx_mp import MPContext
from numpy.polynomial import Chebyshev
from scipy import special

from .errors import AccuracyLossError, DomainError, PoleError

GAMMA_TOLERANCE = 1e-12
ML_TOLERANCE = 1e-10
# Empirical constant C in |E_{rho,mu}(-t)| <= C / (1 + t).
ML_DECAY_CONSTANT = 10.0
EULER_GAMMA = 0.57721566490153286

TAYLOR_LIMIT = 10.0
ASYMPTOTIC_LIMIT = 20.0
BAND_LOWER = 4.0
BAND_UPPER = 100.0
EXTENDED_LIMIT = 600.0

_MAX_TAYLOR_TERMS = 4096
_MAX_POSITIVE_TERMS = 20000
_MAX_ASYMPTOTIC_TERMS = 400
_LOG_SERIES_CUTOFF = math.log(1e-18)
_EXTENDED_GUARD_DIGITS = 20
_INTERPOLATION_DEGREES = (48, 96, 192)
_CHUNK = 4096
# Branch results are accepted with two digits to spare.
_CERTIFIED_ERROR = ML_TOLERANCE / 100

_local = threading.local()
_band_lock = threading.Lock()
_band_cache: Dict[Tuple[float, float], Optional[Chebyshev]] = {}


@dataclass(frozen=True)
class MLParams:
    """Parameters (rho, mu) of the Mittag-Leffler function E_{rho,mu}."""
    rho: float
    mu: float

    def __post_init__(self):
        if not math.isfinite(self.rho) or self.rho <= 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")


def gamma(x: float) -> float:
    """
    Euler's gamma function.

    Args:
        x: Argument, not a non-positive integer

    Returns:
        Gamma(x)
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    return float(special.gamma(x))


def digamma(x: float) -> float:
    """
    Logarithmic derivative of the gamma function, Psi(x) = Gamma'(x) / Gamma(x).

    Only positive arguments are accepted; use Psi(x) = Psi(x + 1) - 1/x to
    reach the negative axis.
    """
    x = float(x)
    if not x > 0:
        raise DomainError(f"digamma is only evaluated for x > 0, got {x}")
    return float(special.psi(x))


def ml_decay_bound(z: float) -> float:
    """Upper bound C / (1 + |z|) for |E_{rho,mu}(z)| on the negative axis."""
    return ML_DECAY_CONSTANT / (1.0 + abs(z))


def _reciprocal_gamma_parts(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sign and log-magnitude of 1 / Gamma(a), elementwise.

    Poles of Gamma get sign 0 and log-magnitude -inf. Non-positive arguments
    use the reflection 1/Gamma(a) = Gamma(1 - a) sin(pi a) / pi.
    """
    a = np.asarray(a, dtype=float)
    sign = np.ones_like(a)
    log_mag = np.empty_like(a)
    positive = a > 0
    log_mag[positive] = -special.gammaln(a[positive])

    neg = ~positive
    if np.any(neg):
        an = a[neg]
        nearest = np.round(an)
        pole = an == nearest
        sine = np.sin(np.pi * (an - nearest)) * np.where(nearest % 2 == 0, 1.0, -1.0)
        with np.errstate(divide="ignore"):
            lm = special.gammaln(1.0 - an) + np.log(np.abs(sine)) - math.log(math.pi)
        sgn = np.sign(sine)
        lm[pole] = -np.inf
        sgn[pole] = 0.0
        log_mag[neg] = lm
        sign[neg] = sgn
    return sign, log_mag


@functools.lru_cache(maxsize=256)
def _taylor_coefficients(rho: float, mu: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    n = np.arange(count, dtype=float)
    sign, log_mag = _reciprocal_gamma_parts(rho * n + mu)
    sign.setflags(write=False)
    log_mag.setflags(write=False)
    return sign, log_mag


def _taylor_term_count(rho: float, mu: float, log_r: float, limit: int) -> int:
    _, log_rg = _taylor_coefficients(rho, mu, limit)
    n = np.arange(limit, dtype=float)
    log_terms = n * log_r + log_rg
    peak = int(np.argmax(log_terms))
    cutoff = min(_LOG_SERIES_CUTOFF, log_terms[peak] + _LOG_SERIES_CUTOFF)
    below = np.nonzero((n > peak) & (n > 0) & (log_terms < cutoff))[0]
    if below.size == 0:
        raise AccuracyLossError(
            f"Taylor series of E_{{{rho},{mu}}} did not converge in {limit} terms")
    return int(below[0]) + 1


def _column_sums(terms: np.ndarray) -> np.ndarray:
    # Contiguous rows let numpy use pairwise summation.
    return np.ascontiguousarray(terms.T).sum(axis=1)


def _taylor_negative(p: MLParams, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Double precision Taylor sums for z < 0 with rounding estimates."""
    log_r = np.log(-z)[None, :]
    count = _taylor_term_count(p.rho, p.mu, float(log_r.max()), _MAX_TAYLOR_TERMS)
    sign, log_rg = _taylor_coefficients(p.rho, p.mu, count)
    n = np.arange(count, dtype=float)[:, None]
    alternating = np.where(n % 2 == 0, 1.0, -1.0)
    exponent = n * log_r + log_rg[:, None]
    terms = alternating * sign[:, None] * np.exp(exponent)
    values = _column_sums(terms)
    # Each term carries a relative error of about eps times its exponent size.
    finite_rg = np.where(np.isfinite(log_rg), np.abs(log_rg), 0.0)[:, None]
    weight = 4.0 + math.log2(count) + np.abs(n * log_r) + finite_rg
    errors = (np.finfo(float).eps * (np.abs(terms) * weight).sum(axis=0)
              + np.abs(terms[-1]))
    return values, errors


def _asymptotic_negative(p: MLParams, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Optimally truncated algebraic expansion for z < 0 with error estimates."""
    log_r = np.log(-z)[None, :]
    n = np.arange(1, _MAX_ASYMPTOTIC_TERMS + 1, dtype=float)[:, None]
    a = p.mu - p.rho * n
    sign, log_rg = _reciprocal_gamma_parts(a)
    # Envelope without the oscillating sine factor, so poles do not fake a minimum.
    envelope = np.where(a > 0,
                        -special.gammaln(np.where(a > 0, a, 1.0)),
                        special.gammaln(1.0 - np.minimum(a, 0.0)) - math.log(math.pi))
    log_envelope = envelope - n * log_r
    stop = np.argmin(log_envelope, axis=0)

    alternating = np.where(n % 2 == 0, 1.0, -1.0)
    with np.errstate(over="ignore", under="ignore"):
        terms = -alternating * sign * np.exp(log_rg - n * log_r)
    keep = np.arange(_MAX_ASYMPTOTIC_TERMS)[:, None] < stop[None, :]
    terms = np.where(keep, terms, 0.0)
    values = _column_sums(terms)
    errors = (np.exp(log_envelope[stop, np.arange(z.size)])
              + 8.0 * np.finfo(float).eps * np.abs(terms).sum(axis=0))

    if p.rho == 1.0 and p.mu == math.floor(p.mu):
        # Finite expansion: every term past n = mu - 1 sits on a pole of Gamma.
        exact = np.arange(1, _MAX_ASYMPTOTIC_TERMS + 1) < p.mu
        with np.errstate(over="ignore", under="ignore"):
            finite = -alternating * sign * np.exp(log_rg - n * log_r)
        values = _column_sums(np.where(exact[:, None], finite, 0.0))
        # E_{1,mu}(z) carries z^{1-mu} e^z on top of the algebraic part.
        values = values + z ** (1.0 - p.mu) * np.exp(z)
        errors = np.finfo(float).eps * (1.0 + np.abs(values))
    return values, errors


def _extended_context(dps: int) -> MPContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = MPContext()
        _local.ctx = ctx
    ctx.dps = dps
    return ctx


@functools.lru_cache(maxsize=8192)
def _ml_extended(rho: float, mu: float, z: float) -> float:
    """Taylor series accumulated in extended precision."""
    m = abs(z) ** (1.0 / rho)
    if m > EXTENDED_LIMIT:
        raise AccuracyLossError(
            f"E_{{{rho},{mu}}}({z}) is outside the range the extended series can certify")
    dps = _EXTENDED_GUARD_DIGITS + int(math.ceil(m / math.log(10)))
    ctx = _extended_context(dps)
    zz = ctx.mpf(z)
    crho = ctx.mpf(rho)
    cmu = ctx.mpf(mu)
    cutoff = ctx.mpf(10) ** (-_EXTENDED_GUARD_DIGITS)
    total = ctx.mpf(0)
    power = ctx.mpf(1)
    for n in range(_MAX_POSITIVE_TERMS):
        term = power * ctx.rgamma(crho * n + cmu)
        total += term
        if n * rho > m + 1 and abs(term) < cutoff * max(1, abs(total)):
            return float(total)
        power *= zz
    raise AccuracyLossError(f"extended series for E_{{{rho},{mu}}}({z}) did not converge")


def _build_band_interpolant(rho: float, mu: float) -> Optional[Chebyshev]:
    """Chebyshev interpolant of r -> E_{rho,mu}(-r) over the intermediate band."""
    domain = [BAND_LOWER ** rho, BAND_UPPER ** rho]

    def sample(r):
        return np.array([_ml_extended(rho, mu, -float(v)) for v in np.atleast_1d(r)])

    for degree in _INTERPOLATION_DEGREES:
        cheb = Chebyshev.interpolate(sample, degree, domain=domain)
        if np.max(np.abs(cheb.coef[-4:])) <= _CERTIFIED_ERROR:
            return cheb
    return None


def _band_interpolant(rho: float, mu: float) -> Optional[Chebyshev]:
    key = (rho, mu)
    with _band_lock:
        if key not in _band_cache:
            _band_cache[key] = _build_band_interpolant(rho, mu)
        return _band_cache[key]


def _ml_positive(p: MLParams, z: float) -> float:
    count = _taylor_term_count(p.rho, p.mu, math.log(z), _MAX_POSITIVE_TERMS)
    sign, log_rg = _taylor_coefficients(p.rho, p.mu, count)
    log_terms = np.arange(count) * math.log(z) + log_rg
    top = float(np.max(log_terms))
    if top + math.log(count) > 700:
        raise AccuracyLossError(f"E_{{{p.rho},{p.mu}}}({z}) overflows double precision")
    return math.exp(top) * math.fsum(sign * np.exp(log_terms - top))


def _resolve_pending(p: MLParams, flat: np.ndarray, m: np.ndarray,
                     pending: np.ndarray, result: np.ndarray):
    idx = np.nonzero(pending)[0]
    in_band = idx[(m[idx] >= BAND_LOWER) & (m[idx] <= BAND_UPPER)]
    if in_band.size:
        cheb = _band_interpolant(p.rho, p.mu)
        if cheb is not None:
            result[in_band] = cheb(-flat[in_band])
            idx = np.setdiff1d(idx, in_band)
    for i in idx:
        result[i] = _ml_extended(p.rho, p.mu, float(flat[i]))


def mittag_leffler_array(p: MLParams, z) -> np.ndarray:
    """
    Evaluate E_{rho,mu} elementwise on an array of real arguments.

    Args:
        p: Mittag-Leffler parameters
        z: Real arguments (any shape)

    Returns:
        Array of E_{rho,mu}(z) with the shape of z
    """
    z = np.asarray(z, dtype=float)
    flat = z.reshape(-1)
    result = np.empty_like(flat)
    for start in range(0, flat.size, _CHUNK):
        result[start:start + _CHUNK] = _evaluate_flat(p, flat[start:start + _CHUNK])
    return result.reshape(z.shape)


def _evaluate_flat(p: MLParams, flat: np.ndarray) -> np.ndarray:
    result = np.empty_like(flat)
    result[flat == 0] = special.rgamma(p.mu)

    for i in np.nonzero(flat > 0)[0]:
        result[i] = _ml_positive(p, float(flat[i]))

    negative = flat < 0
    m = np.zeros_like(flat)
    m[negative] = (-flat[negative]) ** (1.0 / p.rho)
    pending = negative & (m > TAYLOR_LIMIT) & (m < ASYMPTOTIC_LIMIT)

    small = negative & (m <= TAYLOR_LIMIT)
    if np.any(small):
        values, errors = _taylor_negative(p, flat[small])
        result[small] = values
        pending[np.nonzero(small)[0][errors > _CERTIFIED_ERROR]] = True

    large = negative & (m >= ASYMPTOTIC_LIMIT)
    if np.any(large):
        values, errors = _asymptotic_negative(p, flat[large])
        result[large] = values
        pending[np.nonzero(large)[0][errors > _CERTIFIED_ERROR]] = True

    if np.any(pending):
        _resolve_pending(p, flat, m, pending, result)

    if not np.all(np.isfinite(result)):
        raise AccuracyLossError(f"non-finite Mittag-Leffler value for {p}")
    return result


def mittag_leffler(p: MLParams, z: float) -> float:
    """
    Two-parameter Mittag-Leffler function E_{rho,mu}(z) for real z.

    Args:
        p: Mittag-Leffler parameters
        z: Real argument

    Returns:
        E_{rho,mu}(z) to within ML_TOLERANCE absolute error
    """
    return float(mittag_leffler_array(p, np.array([z], dtype=float))[0])


def _check_lambda_args(alpha: float, t0: float, lam: float):
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha out of (0,1]: {alpha}")
    if t0 <= 0:
        raise DomainError(f"t0 must be positive, got {t0}")
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")


def e_lambda_1(alpha: float, t0: float, lam: float) -> float:
    """
    Trace response Gamma(alpha) t0^{alpha-1} E_{alpha,alpha}(-lam t0^alpha).
    """
    _check_lambda_args(alpha, t0, lam)
    return (gamma(alpha) * t0 ** (alpha - 1)
            * mittag_leffler(MLParams(alpha, alpha), -lam * t0 ** alpha))


def e_lambda_2(alpha: float, t0: float, lam: float) -> float:
    """
    Source response t0^alpha E_{alpha,alpha+1}(-lam t0^alpha).

    For alpha = 1 this is (1 - exp(-lam t0)) / lam.
    """
    _check_lambda_args(alpha, t0, lam)
    return t0 ** alpha * mittag_leffler(MLParams(alpha, alpha + 1), -lam * t0 ** alpha)
