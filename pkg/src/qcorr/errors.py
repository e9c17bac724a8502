"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation failures (including parse
and unsupported-input errors) exit 1, I/O problems exit 2 (plain OSError),
internal invariant failures exit 3, verification violations exit 4.
"""


class QcorrError(Exception):
    """Base class for all package errors."""


class ValidationError(QcorrError):
    """Input rejected: bad argument, malformed value, or broken invariant."""


class ParseError(ValidationError):
    """Malformed input text; carries the byte offset where parsing failed."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnsupportedInputError(ValidationError):
    """Input is well-formed but outside the operation's supported domain."""


class InternalInvariantError(QcorrError):
    """A computed result violated an invariant that should always hold."""
