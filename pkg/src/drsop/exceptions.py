class DrsopError(Exception):
    """Base class for errors raised by this package."""


class InputError(DrsopError, ValueError):
    """Invalid problem data, assignment or argument."""


class ParseError(InputError):
    """Malformed instance, scenario, report or assignment text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigurationError(DrsopError, ValueError):
    """Unknown strategy id or out-of-range strategy parameter."""
