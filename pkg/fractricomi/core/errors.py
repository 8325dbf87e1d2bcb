# fractricomi/core/errors.py

from typing import Optional, Sequence, Tuple


class TricomiError(Exception):
    """Base class for every error raised by fractricomi."""
    pass


class ValidationError(TricomiError, ValueError):
    """Raised when an input violates a documented precondition."""
    pass


class NumericalError(TricomiError):
    """Raised when a numerical method cannot deliver the promised accuracy."""
    pass


class PoleError(ValidationError):
    """Raised when the gamma function is evaluated at a non-positive integer."""
    pass


class DomainError(ValidationError):
    """Raised when an argument lies outside the domain of a function."""
    pass


class InvalidSpecError(ValidationError):
    """Raised when problem data violate their invariants."""
    pass


class AliasingError(ValidationError):
    """Raised when more sine modes are requested than the grid resolves."""
    pass


class OutOfRegionError(ValidationError):
    """Raised when a point lies outside the characteristic triangle."""
    pass


class WindowViolationError(ValidationError):
    """Raised when sampled data does not vanish at the truncation window."""
    pass


class ConfigError(ValidationError):
    """Raised for malformed or invalid run configuration documents."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class AccuracyLossError(NumericalError):
    """Raised when a special function value cannot be certified."""
    pass


class QuadratureError(NumericalError):
    """Raised when an adaptive quadrature does not converge."""
    pass


class ResidualViolationError(NumericalError):
    """Raised when a self-check residual exceeds its tolerance."""
    pass


class NotMonotoneError(NumericalError):
    """Raised when the observable is not strictly monotone on the search interval."""
    pass


class OutOfRangeError(NumericalError):
    """Raised when the observed value lies outside the range of the observable."""

    def __init__(self, message: str, value_range: Sequence[float]):
        self.range: Tuple[float, float] = (float(value_range[0]), float(value_range[1]))
        super().__init__(message)


class ConvergenceError(NumericalError):
    """Raised when an iterative method exhausts its iteration budget."""
    pass


class TruncationWarning(UserWarning):
    """Issued when a truncated integral or series may be inaccurate."""
    pass
