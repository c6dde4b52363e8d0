"""Normal forms and equality in F(a,b) x F(c,d), and the shuffle algorithm.

An s-free word projects to a pair (word on a,b; word on c,d); two s-free
words are equal in the product of free groups iff the freely reduced
projections agree componentwise.  The shuffle algorithm converts u to v
(when they are equal) by bubbling every a/b letter leftwards past c/d
letters, freely reducing both halves to a common middle word, then undoing
the same procedure for v.  Its relator count is at most ℓ(u)² + ℓ(v)².
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _config
from .errors import ContainsS, NotEqualInFxF
from .rewriting import KIND_R, Trace, TraceBuilder, _table
from .words import Word, free_reduce, reduce_codes

__all__ = ["FxFNormalForm", "fxf_normal_form", "fxf_equal", "alg1_shuffle"]


@dataclass(frozen=True)
class FxFNormalForm:
    ab_part: Word
    cd_part: Word


def _require_s_free(u: Word) -> None:
    if not u.is_s_free():
        raise ContainsS(f"word contains s letters: {u}")


def fxf_normal_form(u: Word) -> FxFNormalForm:
    """Componentwise freely reduced projections of an s-free word."""
    _require_s_free(u)
    ab = tuple(c for c in u.codes if c < 4)
    cd = tuple(c for c in u.codes if c >= 4)
    return FxFNormalForm(
        ab_part=free_reduce(Word._wrap(ab)),
        cd_part=free_reduce(Word._wrap(cd)),
    )


def fxf_equal(u: Word, v: Word) -> bool:
    """True iff u and v represent the same element of F(a,b) x F(c,d)."""
    return fxf_normal_form(u) == fxf_normal_form(v)


# ---------------------------------------------------------------------------
# Move emission
# ---------------------------------------------------------------------------


def _sort_arrays(codes: tuple[int, ...]):
    """Bulk swap moves of the stable bubble pass sending a/b letters to the
    front (leftmost unsorted a/b letter first).  Positions are relative to
    the window start.  Returns (positions, pair_ids, sorted_codes)."""
    arr = np.frombuffer(bytes(codes), dtype=np.int8) if codes else np.zeros(0, np.int8)
    isab = arr < 4
    ab_pos = np.flatnonzero(isab)
    cd_codes = arr[~isab]
    ab_codes = arr[isab]
    c = ab_pos - np.arange(ab_pos.size)  # c/d letters in front of each a/b letter
    total = int(c.sum())
    if total == 0:
        poss = np.zeros(0, dtype=np.int64)
        pairs = np.zeros(0, dtype=np.int32)
    else:
        ends = np.cumsum(c)
        ragged = np.arange(total) - np.repeat(ends - c, c)
        js = np.repeat(np.arange(ab_pos.size), c)
        poss = js + np.repeat(c, c) - 1 - ragged
        cd_idx = np.repeat(c - 1, c) - ragged
        pairs = _table().swap[cd_codes[cd_idx], np.repeat(ab_codes, c)]
        if np.any(pairs < 0):
            raise ContainsS("window contains s letters; cannot shuffle")
    sorted_codes = tuple(int(x) for x in ab_codes) + tuple(int(x) for x in cd_codes)
    return poss, pairs, sorted_codes


def _reduction_moves(codes):
    """Free reductions taking ``codes`` to its reduced form, innermost first.

    Returns (positions, left_letters, reduced_codes); position i refers to
    the word as it stands when that reduction fires, and left_letters[i] is
    the surviving-pair letter needed to invert the move as an expansion.
    """
    positions: list[int] = []
    letters: list[int] = []
    stack: list[int] = []
    for code in codes:
        if stack and stack[-1] == code ^ 1:
            positions.append(len(stack) - 1)
            letters.append(stack[-1])
            stack.pop()
        else:
            stack.append(code)
    return positions, letters, tuple(stack)


def emit_shuffle_to(tb: TraceBuilder, base: int, cur, tgt) -> int:
    """Emit moves rewriting the window ``cur`` (at absolute offset ``base``)
    into ``tgt`` via the common middle word.  Returns the relator count."""
    cur = tuple(cur)
    tgt = tuple(tgt)
    pos_u, pair_u, sorted_u = _sort_arrays(cur)
    red_pos_u, _red_let_u, mid_u = _reduction_moves(sorted_u)
    pos_v, pair_v, sorted_v = _sort_arrays(tgt)
    red_pos_v, red_let_v, mid_v = _reduction_moves(sorted_v)
    if mid_u != mid_v:
        raise NotEqualInFxF(
            f"words differ in F(a,b) x F(c,d): {Word(cur)} vs {Word(tgt)}"
        )
    cost = int(pos_u.size + pos_v.size)
    _config.check_cost("alg1", cost, len(cur) ** 2 + len(tgt) ** 2)

    # forward: sort u, then reduce both halves
    if pos_u.size:
        tb.extend(np.full(pos_u.size, KIND_R, np.int8), pos_u + base, pair_u)
    for p in red_pos_u:
        tb.append_free_reduce(base + p)
    # reverse: expand mid back out to sorted v, then unsort
    for p, l in zip(reversed(red_pos_v), reversed(red_let_v)):
        tb.append_free_expand(base + p, l)
    if pos_v.size:
        inv = _table().inv
        tb.extend(
            np.full(pos_v.size, KIND_R, np.int8),
            pos_v[::-1] + base,
            inv[pair_v[::-1]],
        )
    return cost


def alg1_shuffle(u: Word, v: Word) -> Trace:
    """A trace from u to v in F(a,b) x F(c,d); cost at most ℓ(u)² + ℓ(v)²."""
    _require_s_free(u)
    _require_s_free(v)
    tb = TraceBuilder()
    emit_shuffle_to(tb, 0, u.codes, v.codes)
    return tb.build(u)
