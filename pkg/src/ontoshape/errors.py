"""Shared exception types for parsing and validation failures."""

from __future__ import annotations


class OntoshapeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(OntoshapeError):
    """Malformed input document.

    Carries a 1-based line number when one is known; the number is folded
    into the message so callers can just print the exception.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DatasetError(OntoshapeError):
    """Problem loading or slicing relational input tables."""


class SchemaError(OntoshapeError):
    """Invalid schema construction input, such as an unknown main class."""
