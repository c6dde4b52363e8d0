"""Words over the generators a, b, c, d, s and their inverses.

A word is an immutable sequence of signed letters.  Internally each letter is
a single integer code (0..9); the inverse of a code is ``code ^ 1``, positive
letters have even codes.  The ASCII convention used everywhere (CLI, trace
files, tests) is lowercase for exponent +1 and uppercase for exponent -1, so
``"aC"`` is a·c⁻¹.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

from .errors import ParseError

GENERATORS = "abcds"

#: letter codes in order: a, a⁻¹, b, b⁻¹, c, c⁻¹, d, d⁻¹, s, s⁻¹
CODE_CHARS = "aAbBcCdDsS"
_CHAR_TO_CODE = {ch: i for i, ch in enumerate(CODE_CHARS)}

A, A_, B, B_, C, C_, D, D_, S, S_ = range(10)


def inverse_code(code: int) -> int:
    return code ^ 1


def is_positive(code: int) -> bool:
    return (code & 1) == 0


def generator_index(code: int) -> int:
    """0..4 for a, b, c, d, s."""
    return code >> 1


def is_s_code(code: int) -> bool:
    return code >= S


class Letter(NamedTuple):
    gen: str
    exp: int

    @property
    def code(self) -> int:
        return _CHAR_TO_CODE[self.gen if self.exp > 0 else self.gen.upper()]

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(GENERATORS[code >> 1], 1 if (code & 1) == 0 else -1)

    def __str__(self) -> str:
        return CODE_CHARS[self.code]


class Word:
    """An immutable word; equality is letter-by-letter, no reduction."""

    __slots__ = ("_codes", "_hash")

    def __init__(self, codes: Iterable[int] = ()):
        codes = tuple(codes)
        for c in codes:
            if not 0 <= c <= 9:
                raise ValueError(f"invalid letter code {c!r}")
        self._codes = codes
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, codes: tuple[int, ...]) -> "Word":
        w = object.__new__(cls)
        w._codes = codes
        w._hash = None
        return w

    @property
    def codes(self) -> tuple[int, ...]:
        return self._codes

    def __len__(self) -> int:
        return len(self._codes)

    def __iter__(self) -> Iterator[Letter]:
        return (Letter.from_code(c) for c in self._codes)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word._wrap(self._codes[i])
        return Letter.from_code(self._codes[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self._codes == other._codes

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._codes)
        return self._hash

    def __add__(self, other: "Word") -> "Word":
        return Word._wrap(self._codes + other._codes)

    def __str__(self) -> str:
        return "".join(CODE_CHARS[c] for c in self._codes)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def inverse(self) -> "Word":
        return Word._wrap(tuple(c ^ 1 for c in reversed(self._codes)))

    def is_s_free(self) -> bool:
        return all(c < S for c in self._codes)


EPSILON = Word()


def parse_word(text: str) -> Word:
    """Parse the ASCII encoding; lowercase = +1, uppercase = -1.

    >>> str(parse_word("aC"))
    'aC'
    >>> len(parse_word(""))
    0
    """
    codes = []
    for i, ch in enumerate(text):
        code = _CHAR_TO_CODE.get(ch)
        if code is None:
            raise ParseError(f"invalid character {ch!r}", i)
        codes.append(code)
    return Word._wrap(tuple(codes))


def free_reduce(u: Word) -> Word:
    """The unique freely reduced form of ``u`` (iterated xx⁻¹ cancellation)."""
    return Word._wrap(reduce_codes(u.codes))


def reduce_codes(codes: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for c in codes:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def is_freely_reduced(codes: Iterable[int]) -> bool:
    prev = -2
    for c in codes:
        if c == prev ^ 1:
            return False
        prev = c
    return True


def exponent_sum(u: Word) -> int:
    """Sum of the exponents of the letters of ``u``."""
    return sum(1 if (c & 1) == 0 else -1 for c in u.codes)


def strip_s(u: Word) -> Word:
    """``u`` with every s^{±1} letter deleted, other letters in order."""
    return Word._wrap(tuple(c for c in u.codes if c < S))
