"""
Exception hierarchy.

Configuration problems map to CLI exit code 2; everything else raised while
computing maps to exit code 3. Value-type errors also subclass ValueError.
"""

from __future__ import annotations


class PQCError(Exception):
    """Root of all toolkit errors."""


class ConfigError(PQCError, ValueError):
    """Invalid run configuration (names, arities, ranges)."""


class CapacityError(PQCError, ValueError):
    """Requested size exceeds a configured limit."""


class GateError(PQCError, ValueError):
    """Malformed gate: bad kind, qubit indices or angle."""


class ArityError(PQCError, ValueError):
    """Parameter or feature vector length does not match the template."""


class EncodingDomainError(PQCError, ValueError):
    """Feature value outside [-1, 1] at bind time."""


class DataFormatError(PQCError, ValueError):
    """Unreadable or malformed dataset table."""


class DegenerateTargetError(PQCError, ValueError):
    """Target has zero variance, so R^2 is undefined."""


class SingularSystemError(PQCError, ValueError):
    """Linear system could not be solved."""


class PartitionError(PQCError, RuntimeError):
    """Test rows differ between runs that must share one test partition."""


class NonFiniteLossError(PQCError, RuntimeError):
    """Optimizer produced a NaN or infinite loss."""

    def __init__(self, iteration: int, value: float):
        super().__init__(f"Non-finite loss {value!r} at iteration {iteration}")
        self.iteration = iteration
        self.value = value

    def __reduce__(self):
        return type(self), (self.iteration, self.value)


class StageError(PQCError, RuntimeError):
    """Compute failure tagged with the pipeline stage it happened in."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause

    def __reduce__(self):
        return type(self), (self.stage, self.cause)
