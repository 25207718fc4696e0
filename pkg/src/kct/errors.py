"""Exception hierarchy shared by every module."""


class KctError(Exception):
    """Base class for all errors raised by kct."""


class InputError(KctError, ValueError):
    """Invalid user input: bad ids, malformed files, out-of-range parameters."""


class MetricError(InputError):
    """The graph does not define a finite metric (it is disconnected)."""

    def __init__(self, message, unreachable=None):
        super().__init__(message)
        self.unreachable = unreachable


class DegenerateGeometryError(InputError):
    """Too few or collinear points for a plane fit."""


class BudgetExceededError(KctError):
    """The exhaustive search would enumerate more candidates than allowed."""

    def __init__(self, count, budget):
        super().__init__(
            f"exhaustive search needs {count} candidate subsets, budget is {budget}"
        )
        self.count = count
        self.budget = budget


class InfeasibleError(KctError):
    """No center set of the requested size satisfies the center constraint."""
