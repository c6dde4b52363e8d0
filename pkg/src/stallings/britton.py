"""Pinch detection and removal for the HNN structure over s.

The stable letter s commutes exactly with the exponent-sum-zero elements of
F(a,b) x F(c,d), so a subword s^e · p · s^{-e} with p s-free and ξ(p) = 0 is
a pinch: deleting the two s letters preserves the group element.  A word
that still has s letters but no pinch does not represent an element of the
base group (Britton's Lemma), hence is neither balanced nor trivial.
"""

from __future__ import annotations

from .words import S, Word


def _xi(codes, lo: int, hi: int) -> int:
    total = 0
    for i in range(lo, hi):
        total += 1 if (codes[i] & 1) == 0 else -1
    return total


def pinch_strip(u: Word) -> Word | None:
    """Delete pinches (leftmost innermost first) until none remain.

    Returns the s-free residue, or None when s letters survive with no
    pinch available.
    """
    codes = list(u.codes)
    while True:
        s_at = [i for i, c in enumerate(codes) if c >= S]
        if not s_at:
            return Word._wrap(tuple(codes))
        for t in range(len(s_at) - 1):
            i, j = s_at[t], s_at[t + 1]
            if codes[i] == codes[j] ^ 1 and _xi(codes, i + 1, j) == 0:
                del codes[j]
                del codes[i]
                break
        else:
            return None
