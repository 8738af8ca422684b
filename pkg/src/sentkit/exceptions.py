"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems are usage
errors (exit 1), everything else raised here is a data/runtime error
(exit 2).
"""


class SentkitError(Exception):
    """Base class for all errors raised by sentkit."""


class ConfigError(SentkitError):
    """Invalid option, hyperparameter, or configuration value."""


class ParseError(SentkitError):
    """Malformed input file content."""

    def __init__(self, message: str, path=None, line: int | None = None):
        loc = ""
        if path is not None:
            loc += f"{path}: "
        if line is not None:
            loc += f"line {line}: "
        super().__init__(loc + message)
        self.path = path
        self.line = line


class DataError(SentkitError):
    """Well-formed input that violates a precondition of an operation."""


class ModelFormatError(SentkitError):
    """Saved model file is unreadable or has an unsupported version."""
