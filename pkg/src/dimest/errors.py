"""Shared exception types.

Everything here derives from ValueError (or UserWarning) so callers that
only care about "bad input vs. bug" can catch one base class. The CLI maps
all of these to exit code 2.
"""

from __future__ import annotations

__all__ = [
    "DegenerateGeometryError",
    "RejectionBudgetError",
    "ThresholdError",
    "ValidityError",
    "VacuousBoundWarning",
]


class DegenerateGeometryError(ValueError):
    """A point configuration carries no usable scale information.

    Raised for coincident clouds, tied neighbor radii that zero a
    denominator, and similar cases where an estimator would otherwise
    return an artifact of floating point rather than geometry.
    """


class RejectionBudgetError(ValueError):
    """A rejection sampler's acceptance probability is too small to run."""


class ThresholdError(ValueError):
    """A bandwidth exceeds the threshold below which a bound is valid."""

    def __init__(self, t: float, t0: float, message: str | None = None):
        self.t = float(t)
        self.t0 = float(t0)
        if message is None:
            message = f"bandwidth t={t:.6g} exceeds threshold t0={t0:.6g}"
        super().__init__(message)


class ValidityError(ValueError):
    """A bound's structural precondition fails for the given parameters."""

    def __init__(self, condition: str, message: str | None = None):
        self.condition = condition
        super().__init__(message or f"validity condition violated: {condition}")


class VacuousBoundWarning(UserWarning):
    """The idealized kernel mass is so large the bound says nothing."""
