# tests/test_special_functions.py

import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, special

from fractricomi.core.errors import DomainError, PoleError
from fractricomi.core.special_functions import (ML_DECAY_CONSTANT, MLParams, digamma,
                                                e_lambda_1, e_lambda_2, gamma, mittag_leffler,
                                                mittag_leffler_array, ml_decay_bound)


def series_oracle(rho, mu, z, terms=400):
    """Mittag-Leffler Taylor series summed with 80 digits."""
    with mpmath.workdps(80):
        zz, r, m = mpmath.mpf(z), mpmath.mpf(rho), mpmath.mpf(mu)
        return float(mpmath.fsum(zz ** n * mpmath.rgamma(r * n + m) for n in range(terms)))


def test_gamma_values():
    """Test gamma against known values."""
    assert gamma(1.0) == pytest.approx(1.0, abs=1e-12)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-12)
    assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0])
def test_gamma_poles(x):
    """Test gamma raises at non-positive integers."""
    with pytest.raises(PoleError):
        gamma(x)


def test_digamma_values():
    """Test digamma at 1 and 1/2."""
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-12)
    assert digamma(0.5) == pytest.approx(-0.5772156649015329 - 2 * math.log(2), abs=1e-12)


def test_digamma_recurrence():
    """Test Psi(x + 1) - Psi(x) = 1/x on [0.5, 10]."""
    for x in np.linspace(0.5, 10.0, 40):
        assert abs(digamma(x + 1) - digamma(x) - 1.0 / x) <= 1e-12


def test_digamma_domain():
    """Test digamma rejects non-positive arguments."""
    with pytest.raises(DomainError):
        digamma(0.0)
    with pytest.raises(DomainError):
        digamma(-2.5)


def test_ml_params_validation():
    """Test MLParams rejects non-positive rho."""
    with pytest.raises(DomainError):
        MLParams(0.0, 1.0)
    with pytest.raises(DomainError):
        MLParams(-0.5, 1.0)


def test_ml_known_values():
    """Test Mittag-Leffler at values with closed forms."""
    assert mittag_leffler(MLParams(1.0, 1.0), -1.0) == pytest.approx(0.36787944117144233, abs=1e-14)
    assert mittag_leffler(MLParams(0.5, 1.0), -1.0) == pytest.approx(0.42758357615580700, abs=1e-10)
    for alpha in (0.2, 0.5, 0.9):
        assert mittag_leffler(MLParams(alpha, alpha), 0.0) == pytest.approx(1.0 / gamma(alpha), rel=1e-14)


def test_ml_exponential():
    """Test E_{1,1}(z) = exp(z) on [-30, 5]."""
    z = np.linspace(-30.0, 5.0, 351)
    values = mittag_leffler_array(MLParams(1.0, 1.0), z)
    np.testing.assert_allclose(values, np.exp(z), rtol=1e-12, atol=1e-12)


def test_ml_erfc_closed_form():
    """Test E_{1/2,1}(z) = exp(z^2) erfc(-z) on [-5, 0]."""
    z = np.linspace(-5.0, 0.0, 101)
    values = mittag_leffler_array(MLParams(0.5, 1.0), z)
    np.testing.assert_allclose(values, special.erfcx(-z), rtol=0, atol=1e-10)


def test_ml_against_extended_series():
    """Test random (rho, mu, z) points against a 200-term high precision series."""
    rng = np.random.default_rng(7)
    for _ in range(100):
        rho = rng.uniform(0.1, 1.0)
        mu = rng.uniform(0.1, 2.0)
        z = rng.uniform(-1.0, 1.0)
        assert abs(mittag_leffler(MLParams(rho, mu), z) - series_oracle(rho, mu, z)) <= 1e-10


@pytest.mark.parametrize("rho,mu", [(0.3, 1.0), (0.7, 0.7), (0.9, 1.9)])
def test_ml_intermediate_arguments(rho, mu):
    """Test arguments between the Taylor and asymptotic regimes against mpmath."""
    z = -np.linspace(3.0, 12.0, 40) ** rho
    values = mittag_leffler_array(MLParams(rho, mu), z)
    expected = [series_oracle(rho, mu, v, terms=800) for v in z]
    np.testing.assert_allclose(values, expected, rtol=0, atol=1e-10)


def test_ml_array_shape():
    """Test array evaluation preserves the argument shape."""
    z = -np.arange(12.0).reshape(3, 4)
    values = mittag_leffler_array(MLParams(0.6, 0.6), z)
    assert values.shape == (3, 4)
    assert values[0, 0] == pytest.approx(1.0 / gamma(0.6))


def test_ml_independent_of_call_history():
    """Test a value in the interpolated band is the same before and after the band is built."""
    p = MLParams(0.63, 1.17)
    z = -(15.0 ** 0.63)
    first = mittag_leffler(p, z)
    mittag_leffler_array(p, -np.linspace(4.5, 99.0, 64) ** 0.63)
    assert mittag_leffler(p, z) == first
    assert mittag_leffler_array(p, np.array([z, -1.0]))[0] == first
    assert first == pytest.approx(series_oracle(0.63, 1.17, z, terms=600), abs=1e-10)


def test_ml_non_positive_mu():
    """Test E_{1,0}(z) = z exp(z), the first term vanishing on the pole of Gamma."""
    z = np.linspace(-8.0, 2.0, 41)
    values = mittag_leffler_array(MLParams(1.0, 0.0), z)
    np.testing.assert_allclose(values, z * np.exp(z), rtol=0, atol=1e-10)
    assert mittag_leffler(MLParams(0.5, -0.5), -1.0) == pytest.approx(
        series_oracle(0.5, -0.5, -1.0), abs=1e-10)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9, 1.0])
def test_ml_decay_bound(alpha):
    """Test t |E_{alpha,alpha}(-t)| stays below the decay constant on [1, 1e4]."""
    t = np.logspace(0.0, 4.0, 60)
    values = mittag_leffler_array(MLParams(alpha, alpha), -t)
    assert np.all(np.abs(values) * t <= ML_DECAY_CONSTANT)
    for mu in (alpha, alpha + 1.0):
        values = mittag_leffler_array(MLParams(alpha, mu), -t)
        assert np.all(np.abs(values) <= [ml_decay_bound(-v) for v in t])


def test_e_lambda_values():
    """Test the observable components in the exponential case."""
    assert e_lambda_1(1.0, 1.0, 1.0) == pytest.approx(math.exp(-1.0), abs=1e-12)
    assert e_lambda_1(1.0, 2.0, 4.0) == pytest.approx(math.exp(-8.0), abs=1e-12)
    assert e_lambda_1(0.5, 1.0, 1.0) == pytest.approx(
        math.sqrt(math.pi) * series_oracle(0.5, 0.5, -1.0), abs=1e-10)
    assert e_lambda_2(1.0, 1.0, 1.0) == pytest.approx(1.0 - math.exp(-1.0), abs=1e-12)
    assert e_lambda_2(1.0, 50.0, 2.0) == pytest.approx(0.5, abs=1e-10)
    lam = math.pi ** 2
    assert e_lambda_2(0.7, 1.0, lam) == pytest.approx(series_oracle(0.7, 1.7, -lam), abs=1e-10)
    assert e_lambda_2(0.7, 1.0, lam) == pytest.approx(0.0976039124105, abs=1e-12)


def test_e_lambda_domain():
    """Test the observable components reject invalid arguments."""
    with pytest.raises(DomainError):
        e_lambda_1(1.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        e_lambda_2(0.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        e_lambda_2(0.5, 1.0, -1.0)


IDENTITY_MATRIX = [(a, k, t) for a in (0.3, 0.6, 0.9) for k in (1, 2, 5) for t in (0.5, 1.0, 2.0)]


@pytest.mark.parametrize("alpha,k,t", IDENTITY_MATRIX)
def test_ml_integration_identity(alpha, k, t):
    """Test int_0^t eta^{alpha-1} E_{alpha,alpha}(-k^2 eta^alpha) = t^alpha E_{alpha,alpha+1}(-k^2 t^alpha)."""
    p = MLParams(alpha, alpha)
    value, _ = integrate.quad(lambda eta: mittag_leffler(p, -k * k * eta ** alpha), 0.0, t,
                              weight="alg", wvar=(alpha - 1.0, 0.0), epsabs=1e-12, epsrel=1e-12,
                              limit=200)
    assert value == pytest.approx(e_lambda_2(alpha, t, k * k), abs=1e-8)


@pytest.mark.parametrize("alpha,k,t", IDENTITY_MATRIX)
def test_ml_differentiation_identity(alpha, k, t):
    """Test d/dt [t^alpha E_{alpha,alpha+1}(-k^2 t^alpha)] = t^{alpha-1} E_{alpha,alpha}(-k^2 t^alpha)."""
    h = 1e-4 * t
    rate = (e_lambda_2(alpha, t + h, k * k) - e_lambda_2(alpha, t - h, k * k)) / (2 * h)
    expected = t ** (alpha - 1) * mittag_leffler(MLParams(alpha, alpha), -k * k * t ** alpha)
    assert rate == pytest.approx(expected, abs=1e-6)
