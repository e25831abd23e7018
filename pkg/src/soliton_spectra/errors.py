"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition or data invariant.

    ``problems`` lists every violated invariant when more than one was found.
    """

    def __init__(self, message, problems=None):
        super().__init__(message)
        self.problems = list(problems) if problems else [message]


class IncompleteSpectrumError(ValidationError):
    """A request reaches beyond the certified completeness cutoff."""

    def __init__(self, message, cutoff):
        super().__init__(message)
        self.cutoff = cutoff
