"""Error hierarchy for redmod.

Domain errors subclass ``ValueError`` so the HTTP layer can turn them into
400 responses the same way it handles invalid input.
"""

from typing import Any


class RedmodError(ValueError):
    """Base class for all domain errors."""


class NonMonicPolynomial(RedmodError):
    """A component polynomial is not monic or has degree 0."""


class ModulusTooSmall(RedmodError):
    """A component modulus is below 2."""


class OrderBudgetExceeded(RedmodError):
    """An enumeration would exceed the configured element budget."""

    def __init__(self, what: str, count: int, budget: int):
        super().__init__(f"{what} needs {count} elements, budget is {budget}")
        self.what = what
        self.count = count
        self.budget = budget


class RingMismatch(RedmodError):
    """Operands live in different rings (or an element is not in the ring)."""


class NotAHomomorphism(RedmodError):
    """A proposed map violates an identity; ``witness`` names the violation."""

    def __init__(self, message: str, witness: dict[str, Any] | None = None):
        super().__init__(message)
        self.witness = witness or {}


class NotASubmodule(RedmodError):
    """A set handed to a quotient construction is not a submodule of the module."""


class BadConfig(RedmodError):
    """A run configuration names unknown claims or malformed specs."""


class OracleMismatch(RuntimeError):
    """Two independent computations of the same quantity disagree."""
