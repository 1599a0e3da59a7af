"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class RegimeError(DomainError):
    """A formula was called in a parameter regime it does not cover."""


class ConvergenceError(ArithmeticError):
    """Adaptive integration failed to reach its tolerance.

    Carries the last two partial results so callers can judge how far off
    the estimate was when the subdivision budget ran out.
    """

    def __init__(self, message: str, partials: tuple[float, float]) -> None:
        super().__init__(message)
        self.partials = partials
