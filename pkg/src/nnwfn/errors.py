"""Exception types shared across the package."""


class NnwfnError(Exception):
    """Base class for all package errors."""


class ParameterError(NnwfnError, ValueError):
    """A parameter violates its validity constraints."""


class DimensionError(ParameterError):
    """A vector or matrix has the wrong dimension for its context."""


class InfeasibleError(ParameterError):
    """The planner cannot produce a solvable plan for the given c.

    Carries ``min_c``, the smallest approximation factor that would make
    the derived leaf parameters solvable.
    """

    def __init__(self, message, min_c):
        super().__init__(message)
        self.min_c = min_c


class BudgetError(NnwfnError, RuntimeError):
    """A build would exceed a configured size budget (3^{wL} or combos)."""


class DatasetFormatError(NnwfnError, ValueError):
    """A dataset file failed to parse."""


class SnapshotError(NnwfnError, ValueError):
    """An index snapshot is unreadable, stale, or from an unknown version."""
