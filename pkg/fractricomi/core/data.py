# fractricomi/core/data.py

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline

from .errors import InvalidSpecError
from .special_functions import gamma

logger = logging.getLogger(__name__)

MIN_SAMPLES = 9


class Profile(ABC):
    """
    Abstract base class for real functions of one variable used as problem data
    (characteristic data psi, trace tau, spatial source shapes).
    """
    name: str = "profile"

    @abstractmethod
    def derivative(self, x, order: int = 0) -> np.ndarray:
        """
        Evaluate the profile (order 0) or one of its first two derivatives.
        """
        pass

    def __call__(self, x) -> np.ndarray:
        return self.derivative(x, 0)

    def support(self) -> Optional[tuple]:
        """Interval outside which the profile vanishes, if it is compactly supported."""
        return None


class Source(ABC):
    """
    Abstract base class for right-hand sides f(x, t) of the mixed equation.
    """
    name: str = "source"
    time_independent: bool = True

    @abstractmethod
    def __call__(self, x, t) -> np.ndarray:
        """Evaluate f at broadcast arrays of points."""
        pass

    def spatial(self) -> Optional[Profile]:
        """The profile f(x) of a time-independent source, None otherwise."""
        return None


def _check_order(order: int):
    if order not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {order}")


class ZeroProfile(Profile):
    name = "zero"

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        return np.zeros_like(np.asarray(x, dtype=float))


class ParabolaProfile(Profile):
    """x(1 - x)."""
    name = "parabola"

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        x = np.asarray(x, dtype=float)
        if order == 0:
            return x * (1.0 - x)
        if order == 1:
            return 1.0 - 2.0 * x
        return np.full_like(x, -2.0)


class SineProfile(Profile):
    """sin(k pi x)."""

    def __init__(self, k: int):
        if k < 1:
            raise InvalidSpecError(f"sine mode must be a positive integer, got {k}")
        self.k = int(k)
        self.name = f"sine:{self.k}"

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        w = self.k * math.pi
        x = np.asarray(x, dtype=float)
        if order == 0:
            return np.sin(w * x)
        if order == 1:
            return w * np.cos(w * x)
        return -w * w * np.sin(w * x)


class UnitBumpProfile(Profile):
    """(4x(1 - x))^2 on [0, 1]; vanishes with its first derivative at both ends."""
    name = "bump"

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        x = np.asarray(x, dtype=float)
        q = 4.0 * x * (1.0 - x)
        dq = 4.0 - 8.0 * x
        if order == 0:
            return q * q
        if order == 1:
            return 2.0 * q * dq
        return 2.0 * dq * dq - 16.0 * q


class LineBumpProfile(Profile):
    """(1 - x^2)^2 on [-1, 1], zero outside."""
    name = "bump"

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 1.0
        q = 1.0 - x * x
        if order == 0:
            value = q * q
        elif order == 1:
            value = -4.0 * x * q
        else:
            value = 12.0 * x * x - 4.0
        return np.where(inside, value, 0.0)

    def support(self) -> Optional[tuple]:
        return (-1.0, 1.0)


class GaussianProfile(Profile):
    """exp(-x^2 / (2 s^2))."""

    def __init__(self, s: float = 1.0):
        if not s > 0:
            raise InvalidSpecError(f"gaussian width must be positive, got {s}")
        self.s = float(s)
        self.name = f"gaussian:{s:g}"

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        x = np.asarray(x, dtype=float)
        s2 = self.s * self.s
        g = np.exp(-x * x / (2.0 * s2))
        if order == 0:
            return g
        if order == 1:
            return -x / s2 * g
        return (x * x / s2 - 1.0) / s2 * g


class TraceSineProfile(Profile):
    """
    Characteristic data whose trace is sin(k pi x) for the given order alpha
    and a zero source.

    psi = g / 2 with g = sin(k pi x) - (k pi / gamma)(cos(k pi x) - 1) and
    gamma = Gamma(1 + alpha), so that tau'' - gamma tau' = -gamma g' holds for
    tau = sin(k pi x) and psi(0) = 0.
    """

    def __init__(self, k: int, alpha: float):
        if k < 1:
            raise InvalidSpecError(f"sine mode must be a positive integer, got {k}")
        if not 0 < alpha <= 1:
            raise InvalidSpecError(f"alpha out of (0,1]: {alpha}")
        self.k = int(k)
        self.alpha = float(alpha)
        self.gamma_const = gamma(1.0 + alpha)
        self.name = f"trace-sine:{self.k},{alpha:g}"

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        w = self.k * math.pi
        c = w / self.gamma_const
        x = np.asarray(x, dtype=float)
        if order == 0:
            g = np.sin(w * x) - c * (np.cos(w * x) - 1.0)
        elif order == 1:
            g = w * np.cos(w * x) + c * w * np.sin(w * x)
        else:
            g = -w * w * np.sin(w * x) + c * w * w * np.cos(w * x)
        return 0.5 * g


class SampledProfile(Profile):
    """
    Profile given by samples, extended by a C2 cubic spline.
    """

    def __init__(self, x, values, name: str = "sampled"):
        x = np.asarray(x, dtype=float)
        values = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.shape != values.shape:
            raise InvalidSpecError("sampled profile needs matching one-dimensional x and values")
        if x.size < MIN_SAMPLES:
            raise InvalidSpecError(
                f"sampled profile needs at least {MIN_SAMPLES} points, got {x.size}")
        if not np.all(np.isfinite(values)):
            raise InvalidSpecError("sampled profile contains non-finite values")
        if np.any(np.diff(x) <= 0):
            raise InvalidSpecError("sample abscissae must be strictly increasing")
        self.x = x
        self.values = values
        self.name = name
        self._spline = CubicSpline(x, values)

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        x = np.asarray(x, dtype=float)
        # Zero outside the sampled interval.
        inside = (x >= self.x[0]) & (x <= self.x[-1])
        return np.where(inside, self._spline(np.clip(x, self.x[0], self.x[-1]), order), 0.0)

    def support(self) -> Optional[tuple]:
        return (float(self.x[0]), float(self.x[-1]))


class ZeroSource(Source):
    name = "zero"

    def __call__(self, x, t) -> np.ndarray:
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        return np.zeros_like(x)

    def spatial(self) -> Optional[Profile]:
        return ZeroProfile()


class _ConstantProfile(Profile):
    def __init__(self, c: float):
        self.c = c

    def derivative(self, x, order: int = 0) -> np.ndarray:
        _check_order(order)
        x = np.asarray(x, dtype=float)
        return np.full_like(x, self.c if order == 0 else 0.0)


class ConstantSource(Source):
    """f(x, t) = c everywhere."""

    def __init__(self, c: float):
        self.c = float(c)
        self.name = f"constant:{c:g}"

    def __call__(self, x, t) -> np.ndarray:
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        return np.full_like(x, self.c)

    def spatial(self) -> Optional[Profile]:
        return _ConstantProfile(self.c)


class ProfileSource(Source):
    """Time independent source f(x, t) = p(x)."""

    def __init__(self, profile: Profile):
        self.profile = profile
        self.name = f"profile:{profile.name}"

    def __call__(self, x, t) -> np.ndarray:
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        return self.profile(x)

    def spatial(self) -> Optional[Profile]:
        return self.profile


class DecayingSource(Source):
    """Time dependent source f(x, t) = exp(-t) p(x)."""
    time_independent = False

    def __init__(self, profile: Profile):
        self.profile = profile
        self.name = f"decaying:{profile.name}"

    def __call__(self, x, t) -> np.ndarray:
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        return np.exp(-t) * self.profile(x)


class CallableSource(Source):
    """Wraps a plain vectorized function f(x, t)."""

    def __init__(self, func: Callable, time_independent: bool = False, name: str = "callable"):
        self.func = func
        self.time_independent = time_independent
        self.name = name

    def __call__(self, x, t) -> np.ndarray:
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        return np.asarray(self.func(x, t), dtype=float) * np.ones_like(x)


def _split_name(text: str):
    name, _, rest = text.strip().partition(":")
    args = [a.strip() for a in rest.split(",")] if rest else []
    return name.strip(), args


def _int_arg(args: List[str], index: int, what: str) -> int:
    try:
        return int(args[index])
    except (IndexError, ValueError):
        raise InvalidSpecError(f"{what} needs an integer argument, got {args}")


def _float_arg(args: List[str], index: int, what: str, default: Optional[float] = None) -> float:
    if index >= len(args) and default is not None:
        return default
    try:
        return float(args[index])
    except (IndexError, ValueError):
        raise InvalidSpecError(f"{what} needs a numeric argument, got {args}")


def load_table(path: str, name: Optional[str] = None) -> SampledProfile:
    """
    Load a sidecar two-column table (x, value) as a spline profile.
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InvalidSpecError(f"cannot read sampled table {path}: {e}")
    if frame.shape[1] != 2:
        raise InvalidSpecError(f"sampled table {path} must have two columns, got {frame.shape[1]}")
    frame = frame.apply(pd.to_numeric, errors="coerce")
    if frame.isna().any().any():
        raise InvalidSpecError(f"sampled table {path} contains non-numeric entries")
    frame = frame.sort_values(frame.columns[0])
    logger.info("Loaded %d samples from %s", len(frame), path)
    return SampledProfile(frame.iloc[:, 0].to_numpy(), frame.iloc[:, 1].to_numpy(),
                          name=name or path)


# Named profiles: name -> (builder taking (args, domain), description).
BUILTIN_PROFILES: Dict[str, Tuple[Callable[[List[str], str], Profile], str]] = {
    "zero": (lambda args, domain: ZeroProfile(), "identically zero"),
    "parabola": (lambda args, domain: ParabolaProfile(), "x(1-x)"),
    "sine": (lambda args, domain: SineProfile(_int_arg(args, 0, "sine")), "sine:k, sin(k pi x)"),
    "bump": (lambda args, domain: LineBumpProfile() if domain == "line" else UnitBumpProfile(),
             "(4x(1-x))^2 on [0,1], (1-x^2)^2 on the line"),
    "gaussian": (lambda args, domain: GaussianProfile(_float_arg(args, 0, "gaussian", default=1.0)),
                 "gaussian:s, exp(-x^2/(2 s^2))"),
    "trace-sine": (lambda args, domain: TraceSineProfile(_int_arg(args, 0, "trace-sine"),
                                                         _float_arg(args, 1, "trace-sine")),
                   "trace-sine:k,alpha, data whose trace is sin(k pi x) at order alpha"),
}


def parse_profile(text: str, domain: str = "bounded") -> Profile:
    """
    Build a profile from a name in BUILTIN_PROFILES such as "parabola",
    "sine:2", "gaussian:0.5", "trace-sine:1,0.5", or from a path to a sidecar
    table ending in ".csv".

    Args:
        text: Profile name with optional arguments
        domain: "bounded" for [0, 1] or "line" for the real line

    Returns:
        The profile
    """
    text = str(text).strip()
    if text.endswith(".csv"):
        return load_table(text)
    name, args = _split_name(text)
    if name not in BUILTIN_PROFILES:
        raise InvalidSpecError(f"unknown profile '{text}'; known: {', '.join(BUILTIN_PROFILES)}")
    builder, _ = BUILTIN_PROFILES[name]
    return builder(args, domain)


def parse_source(text: str, domain: str = "bounded") -> Source:
    """
    Build a source from "zero", "constant:c", "profile:<name>",
    "decaying:<name>" or a sidecar table path (time independent f(x)).
    """
    text = str(text).strip()
    if text.endswith(".csv") and not text.startswith(("profile:", "decaying:")):
        return ProfileSource(load_table(text))
    name, _, rest = text.partition(":")
    if name == "zero":
        return ZeroSource()
    if name == "constant":
        return ConstantSource(_float_arg([rest], 0, "constant"))
    if name == "profile":
        return ProfileSource(parse_profile(rest, domain))
    if name == "decaying":
        return DecayingSource(parse_profile(rest, domain))
    raise InvalidSpecError(f"unknown source '{text}'")

