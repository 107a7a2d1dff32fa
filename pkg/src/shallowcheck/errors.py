"""Exception types shared across the package."""

from __future__ import annotations


class ShallowcheckError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ShallowcheckError):
    """An argument violates an operation's domain contract."""


class SchemaError(ShallowcheckError):
    """A JSON document does not match the expected schema."""


class ValidationError(ShallowcheckError):
    """An invalid circuit was passed where a valid one is required.

    Carries the full violation list produced by :func:`circuit.validate`
    so callers can report every problem at once.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid circuit: " + "; ".join(self.violations))


class CapacityError(ShallowcheckError):
    """A computation would exceed a configured qubit or support cap.

    Raised instead of attempting an allocation that cannot succeed at
    desk scale.  ``size`` is the offending qubit count and ``cap`` the
    limit in force, when known.
    """

    def __init__(self, message: str, *, size: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.size = size
        self.cap = cap
