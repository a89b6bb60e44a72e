"""Exception types shared across the package."""

from __future__ import annotations


class GPTError(Exception):
    """Base class for all package errors."""


class ValidationError(GPTError, ValueError):
    """A state, effect or measurement violates its invariants."""


class SystemMismatchError(ValidationError):
    """Two objects that must share a system type do not."""


class SignallingError(ValidationError):
    """A box-world table violates a non-signalling condition.

    ``violations`` is a list of dicts naming the offending subsystem, the two
    input settings compared, and the context (other inputs and outputs).
    """

    def __init__(self, message: str, violations: list[dict]):
        super().__init__(message)
        self.violations = violations


class ZeroProbabilityError(ValidationError):
    """Conditioning on an outcome that has probability zero."""


class GuardExceeded(GPTError):
    """An enumeration would exceed its configured size limit."""


class SchemaError(ValidationError):
    """Malformed serialized input; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
