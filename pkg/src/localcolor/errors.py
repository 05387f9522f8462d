"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: InputError -> 2, LemmaViolation -> 3.
"""


class InputError(ValueError):
    """Bad input: unknown vertex, malformed file, violated precondition."""


class BrooksException(InputError):
    """The graph is one of the two exceptional cases of Brooks' theorem."""


class LemmaViolation(AssertionError):
    """An invariant that the correctness argument guarantees did not hold."""


class RoundLimitExceeded(RuntimeError):
    """Raised when vertices are still running at the round limit."""

    def __init__(self, message, trace=None, states=None):
        super().__init__(message)
        self.trace = trace
        self.states = states
