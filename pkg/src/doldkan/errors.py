"""Error hierarchy shared by the library and the CLI.

Exit-code mapping used by the CLI: ParseError -> 2, PreconditionError -> 3,
a false verdict (not an exception) -> 1.
"""


class DKError(Exception):
    """Base class for all library errors."""


class ParseError(DKError):
    """Malformed input document or polynomial string."""


class PreconditionError(DKError):
    """An operation was called outside its stated preconditions."""


class TruncationError(PreconditionError):
    """Requested data lies beyond the degree/weight truncation bounds."""
