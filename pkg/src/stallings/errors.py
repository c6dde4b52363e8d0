"""Exception hierarchy for the stallings package.

Every error raised by the library derives from :class:`StallingsError`, so
callers (and the CLI) can catch one type.  Subclasses are deliberately thin;
the message carries the detail.
"""

from __future__ import annotations


class StallingsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(StallingsError):
    """Malformed textual input (word or trace file)."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class IllegalMove(StallingsError):
    """A move whose precondition fails at its position in the current word."""

    def __init__(self, reason: str, position: int, index: int | None = None):
        where = f"move {index}, " if index is not None else ""
        super().__init__(f"illegal move ({where}position {position}): {reason}")
        self.position = position
        self.index = index


class ContainsS(StallingsError):
    """Operation defined only for s-free words got an s letter."""


class NotEqualInFxF(StallingsError):
    """The two words are not equal in F(a,b) x F(c,d)."""


class EmptyInterval(StallingsError):
    """An interval argument was empty."""


class NotDyadicCover(StallingsError):
    """The given intervals do not form a dyadic cover of the target."""


class NotAdjacent(StallingsError):
    """Two intervals or subwords expected to abut do not."""


class NotBalanced(StallingsError):
    """The word does not represent an exponent-sum-zero element of <a,b,c,d>."""


class BadPartition(StallingsError):
    """Partition piece lengths do not concatenate to the word."""


class PositionMismatch(StallingsError):
    """A subword does not occur at its declared position in the host word."""


class IndexOutOfRange(StallingsError):
    """Piece index outside the valid range for the operation."""


class ShapeMismatch(StallingsError):
    """A word does not flatten from / agree with the given alternating shape."""


class BadXY(StallingsError):
    """The flanking letters x, y are not opposite-exponent letters of a..d."""


class TooShort(StallingsError):
    """Word shorter than the operation requires."""


class NotNullHomotopic(StallingsError):
    """The input word does not represent the identity."""


class BadLength(StallingsError):
    """Requested target length is invalid (odd or negative)."""


class CostBoundExceeded(StallingsError):
    """A per-call relator-count assertion failed.

    This means an emitted trace used more relator applications than the
    bound its algorithm guarantees; it is always a bug, never an input error.
    """
