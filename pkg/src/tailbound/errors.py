"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "TailboundError",
    "DomainError",
    "RangeError",
    "NumericalError",
    "ConstructionError",
]


class TailboundError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TailboundError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(TailboundError, OverflowError):
    """A result would overflow the representable floating-point range."""


class NumericalError(TailboundError, ArithmeticError):
    """An iterative scheme failed to reach its target accuracy.

    ``estimate`` and ``err_estimate`` carry the best value found and the
    error bound at the point of failure, when available.
    """

    def __init__(self, message: str, estimate: float | None = None,
                 err_estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.err_estimate = err_estimate


class ConstructionError(TailboundError, RuntimeError):
    """A discrete extremal construction does not exist at the requested size."""
