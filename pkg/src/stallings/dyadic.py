"""Dyadic intervals, minimal dyadic covers, and merge-step schedules.

The dyadic interval D(r, j) is the integer range [j·2^r, (j+1)·2^r − 1]
(closed form of the half-open convention); r is its height.  The minimal
dyadic cover of an interval U is the set of maximal dyadic intervals
contained in U; its heights rise strictly to a peak and then fall strictly,
so it is the dyadic cover with the fewest parts.

Three schedules of pairwise sibling merges drive the divide-and-conquer
cost bound: any dyadic cover to the minimal one, two adjacent minimal
covers to the minimal cover of the union (every merge straddles the
boundary), and a single point adjoined at either end (every merge happens
at that end).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyInterval, NotAdjacent, NotDyadicCover

Interval = tuple[int, int]  # closed integer range (lo, hi)


@dataclass(frozen=True, order=True)
class DyadicInterval:
    r: int  # height
    j: int  # index

    @property
    def lo(self) -> int:
        return self.j << self.r

    @property
    def hi(self) -> int:
        return ((self.j + 1) << self.r) - 1

    @property
    def size(self) -> int:
        return 1 << self.r

    @property
    def span(self) -> Interval:
        return (self.lo, self.hi)

    def contains(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def sibling(self) -> "DyadicInterval":
        return DyadicInterval(self.r, self.j ^ 1)

    def parent(self) -> "DyadicInterval":
        return DyadicInterval(self.r + 1, self.j >> 1)

    def __repr__(self) -> str:
        return f"D({self.r},{self.j})"


@dataclass(frozen=True)
class MergeStep:
    """Merge the equal-length adjacent dyadic pieces at cover indices k, k+1."""

    k: int
    left: DyadicInterval
    right: DyadicInterval

    @property
    def merged(self) -> DyadicInterval:
        return self.left.parent()


def _check_interval(u: Interval) -> Interval:
    lo, hi = u
    if lo > hi:
        raise EmptyInterval(f"empty interval [{lo}, {hi}]")
    return u


def mdc(u: Interval) -> list[DyadicInterval]:
    """Minimal dyadic cover: the maximal dyadic intervals inside U, ascending.

    >>> [d.span for d in mdc((5, 20))]
    [(5, 5), (6, 7), (8, 15), (16, 19), (20, 20)]
    """
    lo, hi = _check_interval(u)
    out: list[DyadicInterval] = []
    p = lo
    while p <= hi:
        r = 0
        while p % (1 << (r + 1)) == 0 and p + (1 << (r + 1)) - 1 <= hi:
            r += 1
        out.append(DyadicInterval(r, p >> r))
        p += 1 << r
    return out


def cover_interval(cover: Sequence[DyadicInterval]) -> Interval:
    return (cover[0].lo, cover[-1].hi)


def is_ascending_cover(cover: Sequence[DyadicInterval], u: Interval) -> bool:
    """True iff the pieces tile U in ascending order."""
    if not cover:
        return False
    lo, hi = u
    if cover[0].lo != lo or cover[-1].hi != hi:
        return False
    return all(cover[i + 1].lo == cover[i].hi + 1 for i in range(len(cover) - 1))


def apply_steps(
    cover: Sequence[DyadicInterval], steps: Sequence[MergeStep]
) -> list[DyadicInterval]:
    """Replay merge steps against a cover (test oracle for the schedules)."""
    cur = list(cover)
    for s in steps:
        if not (
            0 <= s.k < len(cur) - 1
            and cur[s.k] == s.left
            and cur[s.k + 1] == s.right
            and s.left.size == s.right.size
            and s.left.sibling() == s.right
        ):
            raise NotDyadicCover(f"step {s} does not apply to {cur}")
        cur[s.k : s.k + 2] = [s.merged]
    return cur


def dyadic_to_mdc(cover: Sequence[DyadicInterval]) -> list[MergeStep]:
    """Sibling merges transforming a dyadic cover into the minimal one.

    At each step the eligible sibling pair of minimal length is merged,
    leftmost first; the step count is len(cover) − len(mdc).
    """
    cover = list(cover)
    if not cover:
        raise NotDyadicCover("empty cover")
    u = cover_interval(cover)
    if not is_ascending_cover(cover, u):
        raise NotDyadicCover(f"not an ascending dyadic cover of [{u[0]}, {u[1]}]")
    target = len(mdc(u))
    steps: list[MergeStep] = []
    cur = cover
    while len(cur) > target:
        best = -1
        for k in range(len(cur) - 1):
            if cur[k].size == cur[k + 1].size and cur[k].sibling() == cur[k + 1]:
                if best < 0 or cur[k].size < cur[best].size:
                    best = k
        if best < 0:
            raise NotDyadicCover(f"stuck: no sibling pair in {cur}")
        steps.append(MergeStep(best, cur[best], cur[best + 1]))
        cur[best : best + 2] = [cur[best].parent()]
    return steps


def merge_sequence_pair(u: Interval, v: Interval) -> list[MergeStep]:
    """Steps from mdc(U) + mdc(V) to mdc(U ∪ V) for adjacent U, V.

    Every merged pair straddles the boundary: its union is contained in
    neither U nor V alone.
    """
    _check_interval(u)
    _check_interval(v)
    if v[0] != u[1] + 1:
        raise NotAdjacent(f"intervals {u} and {v} do not abut")
    steps = dyadic_to_mdc(mdc(u) + mdc(v))
    for s in steps:
        m = s.merged
        if (m.lo >= u[0] and m.hi <= u[1]) or (m.lo >= v[0] and m.hi <= v[1]):
            raise NotDyadicCover(f"merge {s} does not straddle the boundary")
    return steps


def merge_sequence_point(u: Interval, side: str) -> list[MergeStep]:
    """Steps absorbing the point just left (or right) of U into its cover.

    side="left": from {{min(U)−1}} + mdc(U) to mdc({min(U)−1} ∪ U), merging
    the two leftmost pieces at every step.  side="right" is symmetric with
    the point max(U)+1 and the two rightmost pieces.
    """
    lo, hi = _check_interval(u)
    if side == "left":
        cur = [DyadicInterval(0, lo - 1)] + mdc(u)
        target = mdc((lo - 1, hi))
    elif side == "right":
        cur = mdc(u) + [DyadicInterval(0, hi + 1)]
        target = mdc((lo, hi + 1))
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    steps: list[MergeStep] = []
    while len(cur) > len(target):
        k = 0 if side == "left" else len(cur) - 2
        a, b = cur[k], cur[k + 1]
        if a.size != b.size or a.sibling() != b:
            raise NotDyadicCover(f"end pieces {a}, {b} are not siblings")
        steps.append(MergeStep(k, a, b))
        cur[k : k + 2] = [a.parent()]
    if cur != target:
        raise NotDyadicCover("point-merge schedule did not reach the minimal cover")
    return steps
