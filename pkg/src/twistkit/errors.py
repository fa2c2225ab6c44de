from __future__ import annotations


class TwistkitError(Exception):
    """Base class for all errors raised by twistkit."""


class PreconditionError(TwistkitError, ValueError):
    """An operation was called outside its documented domain."""


class StructureError(TwistkitError):
    """Operands live in incompatible rings, contexts or modules."""


class UnknownParameterError(TwistkitError, KeyError):
    """A parameter name is not part of the ring's fixed alphabet, or is missing."""

    def __init__(self, name: str, message: str | None = None):
        self.name = name
        super().__init__(message or f"unknown parameter {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class VerificationError(TwistkitError):
    """A hard consistency check failed (a regression, not a user error)."""
