"""
Error Types
===========

Exceptions raised by the thermosmc library.

The CLI maps them onto exit codes:
- ConfigError, InvalidArgumentError: exit 2 (usage/config error)
- check failures (gradient suite): exit 1
"""

from typing import Optional


class ThermoSMCError(Exception):
    """Base class for all thermosmc errors."""


class InvalidArgumentError(ThermoSMCError, ValueError):
    """An argument violates the precondition of an operation."""


class ConfigError(ThermoSMCError):
    """A run configuration could not be loaded or validated."""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class IntegrationDivergedError(ThermoSMCError, ArithmeticError):
    """Leapfrog integration produced a non-finite gradient."""

    def __init__(self, step: int, message: Optional[str] = None):
        self.step = step
        super().__init__(message or f"non-finite gradient at leapfrog step {step}")


class PropagationError(ThermoSMCError):
    """A worker failed while propagating its shard; the iteration is void."""

    def __init__(self, shard: int, cause: BaseException):
        self.shard = shard
        self.cause = cause
        super().__init__(f"shard {shard} failed: {cause!r}")
