"""Exception hierarchy shared by every solver and the CLI."""


class TransversalError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(TransversalError, ValueError):
    """Malformed input or violated precondition."""

    exit_code = 2


class SolverFailure(TransversalError):
    """A solver ran but did not produce a transversal.

    ``stage`` names the pipeline step that gave up and ``stats`` carries
    whatever measurements explain why.
    """

    exit_code = 1

    def __init__(self, message, *, stage=None, stats=None):
        super().__init__(message)
        self.stage = stage
        self.stats = dict(stats or {})

    def __str__(self):
        msg = super().__str__()
        return f"[{self.stage}] {msg}" if self.stage else msg


class BudgetExceeded(TransversalError):
    """A node or resample budget ran out before the question was decided."""

    exit_code = 3

    def __init__(self, message, *, spent=None):
        super().__init__(message)
        self.spent = spent
