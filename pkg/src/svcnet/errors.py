"""Shared exception types.

``UsageError`` maps to CLI exit code 2, every other ``SvcnetError`` to 1.
"""


class SvcnetError(Exception):
    """Base class for all library errors."""


class UsageError(SvcnetError):
    """The caller asked for something inconsistent (bad flags, missing inputs)."""


class DegenerateInputError(SvcnetError):
    """Input data too degenerate for the requested estimation."""
