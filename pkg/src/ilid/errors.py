"""Exception hierarchy shared across the toolkit.

Everything user-facing derives from LidError so the CLI can map failures to
exit codes (validation -> 1, I/O is left to the OSError family -> 2).
"""


class LidError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(LidError):
    """Invalid values, shapes, labels, or configuration."""


class ParseError(ValidationError):
    """A file or line could not be parsed; carries a 1-based location."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapabilityError(LidError):
    """An operation was requested from a model kind that cannot provide it."""


class TrainingError(LidError):
    """Training preconditions not met (empty data, single-label data, ...)."""
