# fractricomi/core/quadrature.py

"""
Quadrature rules and difference formulas shared by the solvers.

Rules are returned as (nodes, weights) arrays so callers can evaluate all
integrands in one vectorized call.
"""

import functools
import math
from typing import Callable, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .errors import QuadratureError

PANEL_NODES = 16
GL_NODES = 32
MAX_GRADED_PANELS = 200


@functools.lru_cache(maxsize=64)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@functools.lru_cache(maxsize=256)
def gauss_jacobi(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi nodes and weights on [-1, 1] for the weight (1 - x)^a (1 + x)^b."""
    x, w = roots_jacobi(n, a, b)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def legendre_panels(breaks: Sequence[float], n: int = PANEL_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule over consecutive intervals.

    Args:
        breaks: Increasing panel boundaries
        n: Nodes per panel

    Returns:
        (nodes, weights) of the composite rule
    """
    breaks = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(n)
    half = 0.5 * np.diff(breaks)[:, None]
    mid = 0.5 * (breaks[1:] + breaks[:-1])[:, None]
    return (mid + half * x).ravel(), (half * w).ravel()


def graded_breaks(length: float, smallest: float) -> np.ndarray:
    """
    Breakpoints length * 2^-j from `smallest` up to `length`, increasing.
    """
    if smallest >= length:
        return np.array([0.0, length])
    count = min(MAX_GRADED_PANELS, int(math.ceil(math.log2(length / smallest))))
    return np.concatenate(([0.0], length * 2.0 ** -np.arange(count, -1, -1, dtype=float)))


def left_singular_rule(length: float, beta: float, smallest: float,
                       n: int = PANEL_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rule for the integral of eta^beta g(eta) over [0, length] with beta > -1.

    The first panel [0, b] uses Gauss-Jacobi with the weight eta^beta built in;
    the remaining panels are geometrically graded Gauss-Legendre panels and
    their weights include eta^beta. The returned weights therefore apply to
    g alone.
    """
    if beta <= -1:
        raise QuadratureError(f"endpoint exponent must exceed -1, got {beta}")
    breaks = graded_breaks(length, smallest)
    first = breaks[1]
    xj, wj = gauss_jacobi(n, 0.0, beta)
    nodes0 = 0.5 * first * (1.0 + xj)
    weights0 = wj * (0.5 * first) ** (beta + 1.0)
    nodes1, weights1 = legendre_panels(breaks[1:], n)
    weights1 = weights1 * nodes1 ** beta
    return np.concatenate((nodes0, nodes1)), np.concatenate((weights0, weights1))


def right_singular_panel(a: float, b: float, beta: float,
                         n: int = PANEL_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule for the integral of (b - w)^beta g(w) over [a, b]."""
    if beta <= -1:
        raise QuadratureError(f"endpoint exponent must exceed -1, got {beta}")
    xj, wj = gauss_jacobi(n, beta, 0.0)
    half = 0.5 * (b - a)
    return a + half * (1.0 + xj), wj * half ** (beta + 1.0)


def extrapolate_to_zero(steps: Sequence[float], values: Sequence[float]) -> float:
    """
    Neville extrapolation to step 0 of values known at the given steps.
    """
    h = [float(s) for s in steps]
    p = [float(v) for v in values]
    if len(h) != len(p) or not h:
        raise ValueError("steps and values must be non-empty and of equal length")
    for level in range(1, len(h)):
        for i in range(len(h) - level):
            p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i])
    return p[0]


def richardson_derivative(func: Callable[[float], float], x: float, h: float,
                          lower: float = -np.inf, upper: float = np.inf) -> float:
    """
    First derivative with one level of Richardson extrapolation.

    Central differences are used where x +- h stay inside [lower, upper],
    one-sided differences otherwise.
    """
    if x - h >= lower and x + h <= upper:
        def diff(step):
            return (func(x + step) - func(x - step)) / (2.0 * step)
        return (4.0 * diff(0.5 * h) - diff(h)) / 3.0
    sign = 1.0 if x + h <= upper else -1.0
    f0 = func(x)

    def one_sided(step):
        return sign * (func(x + sign * step) - f0) / step
    return 2.0 * one_sided(0.5 * h) - one_sided(h)
