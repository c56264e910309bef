"""Exception hierarchy shared by every module."""

from __future__ import annotations


class VanishError(Exception):
    """Base class for all package errors."""


class ParameterError(VanishError, ValueError):
    """Invalid caller-supplied parameter (family/rank pair, direction, radius, degree)."""


class DataError(VanishError, ValueError):
    """Inconsistent root or multiplicity data."""


class IdentityViolation(DataError):
    """A catalog row fails the dimension or Ricci identity.

    ``identity`` is ``"dimension identity"`` or ``"Ricci identity"``.
    """

    def __init__(self, identity: str, detail: str):
        self.identity = identity
        super().__init__(f"{identity} violated: {detail}")


class SpaceLookupError(VanishError, KeyError):
    """Unknown symmetric-space label."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class PreconditionError(VanishError):
    """A routine was called outside the regime where its claim applies."""


class CrossCheckError(VanishError):
    """The matrix oracle and the root data disagree structurally."""
