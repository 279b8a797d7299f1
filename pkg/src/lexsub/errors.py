"""Exception hierarchy shared across the package."""


class LexSubError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LexSubError):
    """A file did not match its expected line format."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ValidationError(LexSubError):
    """A value violated an invariant or a call precondition."""


class LexiconError(LexSubError):
    """The lexicon file is internally inconsistent (e.g. dangling relation ids)."""


class BackendError(LexSubError):
    """A model backend failed or was misused (e.g. unknown translation route)."""


class ScorerError(LexSubError):
    """A component scorer failed while ranking an instance.

    The message names the scorer so instance-level failures can be traced
    back to the responsible component.
    """


class ConfigError(LexSubError):
    """A run configuration could not be loaded or failed validation."""
