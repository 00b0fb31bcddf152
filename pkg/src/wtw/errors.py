"""Shared exception types and process exit codes."""

from __future__ import annotations

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_PARSE = 3


class ConfigError(ValueError):
    """Invalid configuration: bad parameter values or inconsistent scenario semantics."""


class ParseError(ValueError):
    """Malformed input content.

    Carries the 1-based line number of the offending line when one is
    known; ``line=None`` marks a whole-file problem.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.reason = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EmptyInputError(ValueError):
    """Input stream contained no data rows.

    Deliberately not a :class:`ParseError`: an empty feed is a different
    failure mode than a malformed one.
    """


def exit_code_for(exc: BaseException) -> int:
    """Map an exception raised by the toolkit onto a CLI exit code."""
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, (ParseError, EmptyInputError)):
        return EXIT_PARSE
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


def describe(exc: BaseException) -> str:
    """One-line human readable error message, naming the file where known."""
    if isinstance(exc, OSError) and exc.filename:
        return f"{exc.filename}: {exc.strerror or exc}"
    return str(exc)
