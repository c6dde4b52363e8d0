"""The presentation, elementary moves, traces, and the trace verifier.

The group is presented as

    < a, b, c, d, s | [a,c], [a,d], [b,c], [b,d], s^a=s^b=s^c=s^d >

with [x,y] = x⁻¹y⁻¹xy and x^y = y⁻¹xy; the shorthand stands for the six
relators s^a s^{-b}, s^a s^{-c}, s^a s^{-d}, s^b s^{-c}, s^b s^{-d},
s^c s^{-d}.  A word is rewritten by three kinds of elementary move: free
reduction, free expansion, and application of a relator, where the last
replaces an occurrence of ``lhs`` by ``rhs`` for a pair with a cyclic
conjugate of lhs·rhs⁻¹ among the relators or their inverses.  The *cost* of
a trace is the number of relator applications; free moves are free.

All relator applications anywhere in this package go through the
precomputed rewrite-pair table below — the single verified chokepoint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import IllegalMove, ParseError
from .words import (
    CODE_CHARS,
    EPSILON,
    Letter,
    Word,
    exponent_sum,
    is_freely_reduced,
    parse_word,
)

# ---------------------------------------------------------------------------
# Presentation
# ---------------------------------------------------------------------------

_A, _B, _C, _D, _S = 0, 2, 4, 6, 8  # positive letter codes


def _commutator(x: int, y: int) -> tuple[int, ...]:
    # [x, y] = x⁻¹ y⁻¹ x y
    return (x ^ 1, y ^ 1, x, y)


def _s_relator(x: int, y: int) -> tuple[int, ...]:
    # s^x s^{-y} = x⁻¹ s x · y⁻¹ s⁻¹ y
    return (x ^ 1, _S, x, y ^ 1, _S ^ 1, y)


_RELATOR_CODES: tuple[tuple[int, ...], ...] = tuple(
    [_commutator(x, y) for x, y in ((_A, _C), (_A, _D), (_B, _C), (_B, _D))]
    + [_s_relator(x, y) for x, y in itertools.combinations((_A, _B, _C, _D), 2)]
)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]


PRESENTATION = Presentation(
    generators=tuple("abcds"),
    relators=tuple(Word(r) for r in _RELATOR_CODES),
)

# ---------------------------------------------------------------------------
# Rewrite-pair table
# ---------------------------------------------------------------------------

MAX_SIDE = 4  # ℓ(lhs), ℓ(rhs) <= 4 suffices for every subroutine here


def _rotations(codes: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for i in range(len(codes)):
        yield codes[i:] + codes[:i]


def _invert(codes: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(c ^ 1 for c in reversed(codes))


@lru_cache(maxsize=1)
def _pair_list() -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """All (lhs, rhs), both freely reduced, both of length <= MAX_SIDE, with
    some cyclic conjugate of lhs·rhs⁻¹ among the relators or their inverses."""
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    all_rels = [r for r in _RELATOR_CODES] + [_invert(r) for r in _RELATOR_CODES]
    for rel in all_rels:
        for rot in _rotations(rel):
            for i in range(len(rot) + 1):
                lhs, rhs = rot[:i], _invert(rot[i:])
                if len(lhs) > MAX_SIDE or len(rhs) > MAX_SIDE:
                    continue
                if is_freely_reduced(lhs) and is_freely_reduced(rhs):
                    seen.add((lhs, rhs))
    return tuple(sorted(seen))


class _PairTable:
    """Compact lookups over the rewrite-pair table, shared by the verifier."""

    def __init__(self) -> None:
        pairs = _pair_list()
        self.pairs = pairs
        self.index: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {
            p: i for i, p in enumerate(pairs)
        }
        n = len(pairs)
        self.lhs = np.full((n, MAX_SIDE), -1, dtype=np.int8)
        self.rhs = np.full((n, MAX_SIDE), -1, dtype=np.int8)
        self.lhs_len = np.zeros(n, dtype=np.int64)
        self.rhs_len = np.zeros(n, dtype=np.int64)
        for i, (l, r) in enumerate(pairs):
            self.lhs[i, : len(l)] = l
            self.rhs[i, : len(r)] = r
            self.lhs_len[i] = len(l)
            self.rhs_len[i] = len(r)
        self.inv = np.array(
            [self.index[(r, l)] for (l, r) in pairs], dtype=np.int32
        )
        # adjacent-transposition pairs: (xy -> yx) for commuting x, y
        self.swap = np.full((10, 10), -1, dtype=np.int32)
        for (l, r), i in self.index.items():
            if len(l) == 2 and len(r) == 2 and (l[1], l[0]) == r:
                self.swap[l[0], l[1]] = i
        # s-conveyance pairs: (s^e x y -> x y s^e)
        self.convey = np.full((10, 10, 10), -1, dtype=np.int32)
        for (l, r), i in self.index.items():
            if len(l) == 3 and len(r) == 3 and l[0] >= 8 and r == (l[1], l[2], l[0]):
                self.convey[l[0], l[1], l[2]] = i

    def pair_words(self, pair_id: int) -> tuple[Word, Word]:
        l, r = self.pairs[pair_id]
        return Word(l), Word(r)


@lru_cache(maxsize=1)
def _table() -> _PairTable:
    return _PairTable()


def rewrite_pairs() -> frozenset[tuple[Word, Word]]:
    """The deduplicated table of legal relator-application pairs."""
    return frozenset((Word(l), Word(r)) for l, r in _pair_list())


def swap_pair_id(left_code: int, right_code: int) -> int:
    """Pair id for the adjacent transposition (xy -> yx); -1 if not legal."""
    return int(_table().swap[left_code, right_code])


def convey_pair_id(s_code: int, p_code: int, n_code: int) -> int:
    """Pair id for the s-conveyance (s^e·x·y -> x·y·s^e); -1 if not legal."""
    return int(_table().convey[s_code, p_code, n_code])


def inverse_pair_id(pair_id: int) -> int:
    return int(_table().inv[pair_id])


def pair_id_of(lhs: Word, rhs: Word) -> int:
    """Table id of (lhs, rhs), or -1 when the pair is not a legal rewrite."""
    return _table().index.get((lhs.codes, rhs.codes), -1)


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------

KIND_F, KIND_E, KIND_R = 0, 1, 2
_KIND_CHAR = {KIND_F: "F", KIND_E: "E", KIND_R: "R"}


@dataclass(frozen=True)
class Move:
    """One elementary rewriting step at an absolute position."""

    kind: str  # "F" (free reduction), "E" (free expansion), "R" (relator)
    pos: int
    letter: Letter | None = None  # E: the inserted letter x (pair x·x⁻¹)
    lhs: Word | None = None  # R only
    rhs: Word | None = None  # R only

    @staticmethod
    def free_reduce(pos: int) -> "Move":
        return Move("F", pos)

    @staticmethod
    def free_expand(pos: int, letter: Letter) -> "Move":
        return Move("E", pos, letter=letter)

    @staticmethod
    def apply_relator(pos: int, lhs: Word, rhs: Word) -> "Move":
        return Move("R", pos, lhs=lhs, rhs=rhs)


def apply_move(w: Word, m: Move) -> Word:
    """Apply one move; raises :class:`IllegalMove` when its precondition fails.

    Exponent sum is preserved by every legal move.
    """
    codes = w.codes
    n = len(codes)
    if m.kind == "F":
        if not 0 <= m.pos <= n - 2:
            raise IllegalMove("free reduction out of range", m.pos)
        if codes[m.pos] != codes[m.pos + 1] ^ 1:
            raise IllegalMove("letters are not an inverse pair", m.pos)
        return Word._wrap(codes[: m.pos] + codes[m.pos + 2 :])
    if m.kind == "E":
        if not 0 <= m.pos <= n:
            raise IllegalMove("free expansion out of range", m.pos)
        if m.letter is None:
            raise IllegalMove("free expansion without a letter", m.pos)
        c = m.letter.code
        return Word._wrap(codes[: m.pos] + (c, c ^ 1) + codes[m.pos :])
    if m.kind == "R":
        if m.lhs is None or m.rhs is None:
            raise IllegalMove("relator move without a pair", m.pos)
        if pair_id_of(m.lhs, m.rhs) < 0:
            raise IllegalMove("pair is not in the rewrite-pair table", m.pos)
        l = m.lhs.codes
        if not 0 <= m.pos <= n - len(l):
            raise IllegalMove("relator application out of range", m.pos)
        if codes[m.pos : m.pos + len(l)] != l:
            raise IllegalMove("lhs does not occur at position", m.pos)
        return Word._wrap(codes[: m.pos] + m.rhs.codes + codes[m.pos + len(l) :])
    raise IllegalMove(f"unknown move kind {m.kind!r}", m.pos)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


class Trace:
    """A replayable sequence of moves from a start word.

    Moves are stored compactly (kind / position / argument arrays); the
    argument of an R move is an index into the rewrite-pair table, of an E
    move the inserted letter code.
    """

    __slots__ = ("start", "_kinds", "_poss", "_args")

    def __init__(
        self,
        start: Word,
        kinds: np.ndarray,
        poss: np.ndarray,
        args: np.ndarray,
    ):
        self.start = start
        self._kinds = kinds
        self._poss = poss
        self._args = args

    def __len__(self) -> int:
        return int(self._kinds.size)

    @property
    def cost(self) -> int:
        """Number of relator applications."""
        return int(np.count_nonzero(self._kinds == KIND_R))

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._kinds, self._poss, self._args

    def moves(self) -> Iterator[Move]:
        table = _table()
        for k, p, a in zip(self._kinds, self._poss, self._args):
            if k == KIND_F:
                yield Move.free_reduce(int(p))
            elif k == KIND_E:
                yield Move.free_expand(int(p), Letter.from_code(int(a)))
            else:
                lhs, rhs = table.pair_words(int(a))
                yield Move.apply_relator(int(p), lhs, rhs)

    @staticmethod
    def concat(first: "Trace", second: "Trace") -> "Trace":
        """Concatenate; caller guarantees end(first) == start(second)."""
        return Trace(
            first.start,
            np.concatenate([first._kinds, second._kinds]),
            np.concatenate([first._poss, second._poss]),
            np.concatenate([first._args, second._args]),
        )


class TraceBuilder:
    """Accumulates moves, scalar or in bulk, with an exact running cost."""

    _CHUNK = 1 << 14

    def __init__(self) -> None:
        self._chunks: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        self._k: list[int] = []
        self._p: list[int] = []
        self._a: list[int] = []
        self.cost = 0
        self.n_moves = 0

    def _flush(self) -> None:
        if self._k:
            self._chunks.append(
                (
                    np.array(self._k, dtype=np.int8),
                    np.array(self._p, dtype=np.int64),
                    np.array(self._a, dtype=np.int32),
                )
            )
            self._k, self._p, self._a = [], [], []

    def append_free_reduce(self, pos: int) -> None:
        self._k.append(KIND_F)
        self._p.append(pos)
        self._a.append(0)
        self.n_moves += 1
        if len(self._k) >= self._CHUNK:
            self._flush()

    def append_free_expand(self, pos: int, letter_code: int) -> None:
        self._k.append(KIND_E)
        self._p.append(pos)
        self._a.append(letter_code)
        self.n_moves += 1
        if len(self._k) >= self._CHUNK:
            self._flush()

    def append_relator(self, pos: int, pair_id: int) -> None:
        self._k.append(KIND_R)
        self._p.append(pos)
        self._a.append(pair_id)
        self.cost += 1
        self.n_moves += 1
        if len(self._k) >= self._CHUNK:
            self._flush()

    def extend(self, kinds: np.ndarray, poss: np.ndarray, args: np.ndarray) -> None:
        self._flush()
        kinds = np.asarray(kinds, dtype=np.int8)
        self._chunks.append(
            (
                kinds,
                poss if poss.dtype == np.int64 else poss.astype(np.int64),
                args if args.dtype == np.int32 else args.astype(np.int32),
            )
        )
        self.cost += int(np.count_nonzero(kinds == KIND_R))
        self.n_moves += int(kinds.size)

    def build(self, start: Word) -> Trace:
        self._flush()
        if not self._chunks:
            empty = (
                np.zeros(0, dtype=np.int8),
                np.zeros(0, dtype=np.int64),
                np.zeros(0, dtype=np.int32),
            )
            return Trace(start, *empty)
        ks = np.concatenate([c[0] for c in self._chunks])
        ps = np.concatenate([c[1] for c in self._chunks])
        as_ = np.concatenate([c[2] for c in self._chunks])
        return Trace(start, ks, ps, as_)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceReport:
    end: Word
    cost: int
    max_len: int


def verify_trace(trace: Trace, use_jit: bool | None = None) -> TraceReport:
    """Replay every move, checking legality; fails on the first illegal move.

    Returns the end word, the exact relator-application count, and the
    maximum intermediate word length.
    """
    from . import _replay

    kinds, poss, args = trace.arrays()
    t = _table()
    status, fail_idx, end_codes, cost, max_len = _replay.replay(
        trace.start.codes, kinds, poss, args, t, use_jit=use_jit
    )
    if status != 0:
        pos = int(poss[fail_idx]) if fail_idx < len(poss) else -1
        raise IllegalMove(_replay.STATUS_REASONS[status], pos, index=int(fail_idx))
    end = Word._wrap(tuple(int(c) for c in end_codes))
    if exponent_sum(end) != exponent_sum(trace.start):
        raise IllegalMove("exponent sum not preserved", -1)
    return TraceReport(end=end, cost=int(cost), max_len=int(max_len))


# ---------------------------------------------------------------------------
# Trace files
# ---------------------------------------------------------------------------
#
# Line-oriented text: line 1 is the start word (ASCII encoding); each later
# line is one move:   R <pos> <lhs> <rhs>   |   F <pos>   |   E <pos> <letter>
# The empty word is written as "-" in lhs/rhs fields.


def _fmt_word(w: Word) -> str:
    return str(w) if len(w) else "-"


def _parse_word_field(text: str, lineno: int) -> Word:
    if text == "-":
        return EPSILON
    try:
        return parse_word(text)
    except ParseError as exc:
        raise ParseError(f"line {lineno}: {exc}", exc.position) from None


def write_trace(trace: Trace, path: str) -> None:
    table = _table()
    kinds, poss, args = trace.arrays()
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(str(trace.start))
        fh.write("\n")
        for k, p, a in zip(kinds, poss, args):
            if k == KIND_F:
                fh.write(f"F {p}\n")
            elif k == KIND_E:
                fh.write(f"E {p} {CODE_CHARS[a]}\n")
            else:
                l, r = table.pairs[int(a)]
                fh.write(
                    f"R {p} {_fmt_word(Word(l))} {_fmt_word(Word(r))}\n"
                )


def read_trace(path: str) -> Trace:
    table = _table()
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty trace file", 0)
    start = parse_word(lines[0])
    ks: list[int] = []
    ps: list[int] = []
    as_: list[int] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(" ")
        tag = fields[0]
        if tag == "F" and len(fields) == 2:
            ks.append(KIND_F)
            ps.append(int(fields[1]))
            as_.append(0)
        elif tag == "E" and len(fields) == 3 and len(fields[2]) == 1:
            ks.append(KIND_E)
            ps.append(int(fields[1]))
            as_.append(parse_word(fields[2]).codes[0])
        elif tag == "R" and len(fields) == 4:
            lhs = _parse_word_field(fields[2], lineno)
            rhs = _parse_word_field(fields[3], lineno)
            pid = table.index.get((lhs.codes, rhs.codes))
            if pid is None:
                raise ParseError(
                    f"line {lineno}: not a rewrite pair: {fields[2]} {fields[3]}", 0
                )
            ks.append(KIND_R)
            ps.append(int(fields[1]))
            as_.append(pid)
        else:
            raise ParseError(f"line {lineno}: malformed move {line!r}", 0)
    return Trace(
        start,
        np.array(ks, dtype=np.int8),
        np.array(ps, dtype=np.int64),
        np.array(as_, dtype=np.int32),
    )
