"""Shared exception types."""


class QLBenchError(Exception):
    """Base class for all workbench errors."""


class DimensionMismatchError(QLBenchError, ValueError):
    """Operands live in spaces of different dimension."""


class InvariantViolationError(QLBenchError, ValueError):
    """A value failed its construction invariant."""


class ImpossibleOutcomeError(QLBenchError, ValueError):
    """Conditioning on an outcome of (numerically) zero probability."""


class PreconditionError(QLBenchError, ValueError):
    """An operation was called outside its stated precondition."""
