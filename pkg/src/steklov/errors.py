"""Exception hierarchy shared by all modules.

The CLI maps these onto exit statuses: PreconditionError -> 3,
ConsistencyError -> 4.
"""


class SteklovError(Exception):
    pass


class PreconditionError(SteklovError, ValueError):
    """Input violates an operation's documented precondition."""


class AliasingError(PreconditionError):
    """Sampling grid too coarse for the requested band."""


class TruncationError(PreconditionError):
    """Matrix truncation too small for an exact trace."""


class ConsistencyError(SteklovError, ArithmeticError):
    """Two independent numerical routes disagree, or a proven bound fails."""


class SearchError(SteklovError, RuntimeError):
    """Root search exhausted its budget."""

    def __init__(self, message, best_residual=None, best_point=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.best_point = best_point
