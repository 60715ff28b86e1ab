"""Shared exception types."""


class InternalCheckError(RuntimeError):
    """An internal consistency check failed.

    Raised when a mathematically forced identity does not hold (Weil bound
    violation from point counts, parity failure, inexact group-order
    division). Signals a bug, never bad user input; the CLI maps it to
    exit code 2.
    """


class CurveModelError(ValueError):
    """The given polynomial is not an admissible genus-2 model."""
