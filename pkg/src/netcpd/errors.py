"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class InvalidSpecError(ValueError):
    """A simulation design produces invalid probabilities or parameters."""


class DegenerateInputError(ValueError):
    """Input is structurally degenerate (e.g. an all-zero adjacency matrix)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or produced unusable output."""


class SeriesFormatError(ValueError):
    """A series file is malformed; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
