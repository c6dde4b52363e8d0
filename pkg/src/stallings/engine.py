"""The word-problem decider and the main reduction to the empty word.

``decide_identity`` settles membership of the trivial element by pinch
removal (the HNN structure over s) followed by a free-product-of-frees
check on the residue.

``reduce_to_empty`` converts a null-homotopic word w of length n to ε with
a verified trace whose relator count is at most 17643n²/2 − 2174n.  It runs
n/2 iterations; each absorbs one opposite pair of letters into the set T of
handled positions, maintaining the decomposition w = u₁v₁u₂…v_{k−1}u_k
(the v_j are the maximal absorbed runs, always balanced) and the
materialized word w_i = u₁τ₁u₂…τ_{k−1}u_k, where τ_j is the dyadic
alternating form of v_j.  An s-pair is cancelled by conveying s through the
intervening form (one relator per opposite-generator pair); a letter pair
is assimilated into the form and re-dyadicized; newly adjacent forms are
merged.  After the loop, w_{n/2} is s-free and trivial in F(a,b) x F(c,d)
and is shuffled to ε.

Intermediate materialized words never exceed length 10n at iteration
boundaries, and the total cost decomposes into four buckets (s-shuffles,
assimilations, dyadic merges, final shuffle), each within its own bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _config
from .altform import AltShape, daf
from .britton import pinch_strip
from .dyadic import Interval
from .errors import NotBalanced, NotNullHomotopic, ShapeMismatch, TooShort
from .fxf import emit_shuffle_to, fxf_equal
from .rewriting import (
    KIND_E,
    KIND_F,
    KIND_R,
    Trace,
    TraceBuilder,
    convey_pair_id,
    verify_trace,
)
from .subroutines import _emit_alg3, _emit_alg5, _emit_alg6
from .words import EPSILON, S, Word

__all__ = [
    "decide_identity",
    "find_xy",
    "reduce_to_empty",
    "reduce_report",
    "area_report",
    "cost_bound",
    "ReduceReport",
    "AreaReport",
]


def cost_bound(n: int) -> int:
    """The closed-form relator budget 17643n²/2 − 2174n for even n."""
    return (17643 * n * n) // 2 - 2174 * n


def decide_identity(u: Word) -> bool:
    """True iff u represents the identity."""
    residue = pinch_strip(u)
    return residue is not None and fxf_equal(residue, EPSILON)


def _valid_pair(x: int, y: int) -> bool:
    if x >= S or y >= S:
        return x >= S and y >= S and x == y ^ 1
    return (x & 1) != (y & 1)


def find_xy(u_concat: Word) -> tuple[int, int]:
    """Leftmost adjacent pair (1-based positions) that is either s^{±1}s^{∓1}
    or two opposite-exponent letters of a..d."""
    codes = u_concat.codes
    if len(codes) < 2:
        raise TooShort(f"word of length {len(codes)} has no pair")
    for i in range(len(codes) - 1):
        if _valid_pair(codes[i], codes[i + 1]):
            return (i + 1, i + 2)
    raise NotBalanced(f"no opposite pair found; word is not balanced: {u_concat}")


# ---------------------------------------------------------------------------
# Reduction engine
# ---------------------------------------------------------------------------


@dataclass
class _Run:
    """A maximal absorbed block w[lo..hi], its stripped-letter positions in
    the stripped host (None when the block is all s letters), and the
    dyadic alternating form currently materialized for it."""

    lo: int
    hi: int
    v_iv: Interval | None
    shape: AltShape


@dataclass
class ReduceReport:
    trace: Trace
    n: int
    cost: int
    bound: int
    buckets: dict[str, int]
    boundary_lengths: list[int] = field(default_factory=list)
    max_boundary_length: int = 0


@dataclass(frozen=True)
class AreaReport:
    n: int
    cost: int
    bound: int
    max_intermediate_length: int


def _emit_s_convey(tb: TraceBuilder, p: int, s_code: int, flat: tuple[int, ...]) -> int:
    """Convey s^e at position p through the alternating word ``flat`` and
    cancel it with the s^{-e} just beyond; cost = opposite-generator pairs."""
    half = len(flat) // 2
    cost = 0
    if half:
        arr = np.frombuffer(bytes(flat), dtype=np.int8)
        firsts, seconds = arr[0::2], arr[1::2]
        differ = (firsts >> 1) != (seconds >> 1)
        counts = np.where(differ, 1, 2)
        starts = np.cumsum(counts) - counts
        total = int(counts.sum())
        kinds = np.empty(total, dtype=np.int8)
        poss = np.empty(total, dtype=np.int64)
        args = np.empty(total, dtype=np.int32)
        base = p + 2 * np.arange(half, dtype=np.int64)
        idx = starts[differ]
        kinds[idx] = KIND_R
        poss[idx] = base[differ]
        ids = np.array(
            [convey_pair_id(s_code, int(a), int(b)) for a, b in
             zip(firsts[differ], seconds[differ])],
            dtype=np.int32,
        ) if np.any(differ) else np.zeros(0, dtype=np.int32)
        if ids.size and np.any(ids < 0):
            raise ShapeMismatch("no conveyance pair for an alternating pair")
        args[idx] = ids
        idx = starts[~differ]
        kinds[idx] = KIND_F
        poss[idx] = base[~differ] + 1
        args[idx] = 0
        kinds[idx + 1] = KIND_E
        poss[idx + 1] = base[~differ]
        args[idx + 1] = firsts[~differ]
        tb.extend(kinds, poss, args)
        cost = int(np.count_nonzero(differ))
    tb.append_free_reduce(p + len(flat))
    return cost


class _LiveWord:
    """The materialized word as a mutable code array (splice per step)."""

    def __init__(self, codes):
        self.arr = np.array(codes, dtype=np.int8)

    def __len__(self) -> int:
        return int(self.arr.size)

    def splice(self, lo: int, hi: int, new_codes) -> None:
        mid = np.asarray(new_codes, dtype=np.int8)
        self.arr = np.concatenate([self.arr[:lo], mid, self.arr[hi:]])

    def codes(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.arr)


class _Reducer:
    def __init__(self, w: Word):
        self.w = w
        self.n = len(w)
        self.codes = w.codes
        self.tb = TraceBuilder()
        self.live = _LiveWord(w.codes)
        self.absorbed = bytearray(self.n)
        self.by_lo: dict[int, _Run] = {}
        self.by_hi: dict[int, _Run] = {}
        self.charged: set[tuple[int, int]] = set()
        self.buckets = {"s_shuffle": 0, "alg5": 0, "alg2": 0, "alg1_final": 0}
        self.boundary_lengths: list[int] = []
        hat = []
        hp = 0
        for c in self.codes:
            hat.append(hp if c < S else -1)
            hp += c < S
        self.hat_of = hat

    # -- run table ---------------------------------------------------------

    def _add_run(self, run: _Run) -> None:
        self.by_lo[run.lo] = run
        self.by_hi[run.hi] = run

    def _pop_run(self, run: _Run) -> None:
        del self.by_lo[run.lo]
        del self.by_hi[run.hi]

    # -- one iteration -----------------------------------------------------

    def _find_pair(self) -> tuple[int, int, int]:
        """Leftmost valid adjacent pair among unabsorbed positions; returns
        (p, q, live offset of p)."""
        pos = 0
        live_off = 0
        prev = -1
        prev_live = 0
        while pos < self.n:
            if self.absorbed[pos]:
                run = self.by_lo[pos]
                live_off += run.shape.flat_len
                pos = run.hi + 1
                continue
            if prev >= 0 and _valid_pair(self.codes[prev], self.codes[pos]):
                return prev, pos, prev_live
            prev, prev_live = pos, live_off
            live_off += 1
            pos += 1
        raise NotBalanced("no absorbable pair; input was not null-homotopic")

    def _mid_run(self, p: int, q: int) -> _Run | None:
        if q == p + 1:
            return None
        run = self.by_lo[p + 1]
        if run.hi != q - 1:
            raise ShapeMismatch("absorbed block between pair is not one run")
        self._pop_run(run)
        return run

    def step(self) -> None:
        p, q, P = self._find_pair()
        x, y = self.codes[p], self.codes[q]
        mid = self._mid_run(p, q)
        self.absorbed[p] = self.absorbed[q] = 1
        if x >= S:
            new_run = self._absorb_s_pair(p, q, P, x, mid)
        else:
            new_run = self._absorb_letter_pair(p, q, P, x, y, mid)
        base = P
        left = self.by_hi.get(p - 1)
        if left is not None:
            self._pop_run(left)
            base -= left.shape.flat_len
            new_run = self._merge(left, new_run, base)
        right = self.by_lo.get(q + 1)
        if right is not None:
            self._pop_run(right)
            new_run = self._merge(new_run, right, base)
        self._add_run(new_run)
        cur = len(self.live)
        self.boundary_lengths.append(cur)
        if cur > 10 * self.n:
            raise ShapeMismatch(
                f"materialized length {cur} exceeds 10n = {10 * self.n}"
            )

    def _absorb_s_pair(self, p: int, q: int, P: int, x: int, mid: _Run | None) -> _Run:
        if mid is None:
            self.tb.append_free_reduce(P)
            self.live.splice(P, P + 2, ())
            return _Run(p, q, None, AltShape(()))
        flat = mid.shape.flatten().codes
        cost = _emit_s_convey(self.tb, P, x, flat)
        _config.check_cost("s_shuffle", cost, len(flat) // 2)
        self.buckets["s_shuffle"] += cost
        end = P + len(flat) + 2
        self.live.splice(P, end, flat)
        return _Run(p, q, mid.v_iv, mid.shape)

    def _absorb_letter_pair(
        self, p: int, q: int, P: int, x: int, y: int, mid: _Run | None
    ) -> _Run:
        mid_shape = mid.shape if mid is not None else AltShape(())
        mid_iv = mid.v_iv if mid is not None else None
        cost, bar_shape = _emit_alg5(self.tb, P, x, mid_shape, y)
        self.buckets["alg5"] += cost
        x_pos, y_pos = self.hat_of[p], self.hat_of[q]
        cost, shape, _steps = _emit_alg6(
            self.tb, P, bar_shape, mid_iv, x_pos, y_pos, self.charged
        )
        self.buckets["alg2"] += cost
        end = P + 2 + mid_shape.flat_len
        self.live.splice(P, end, shape.flatten().codes)
        run = _Run(p, q, (x_pos, y_pos), shape)
        self._debug_check_run(run)
        return run

    def _merge(self, left: _Run, right: _Run, base: int) -> _Run:
        cost, shape, steps = _emit_alg3(
            self.tb, base, left.shape, right.shape, left.v_iv, right.v_iv, self.charged
        )
        self.buckets["alg2"] += cost
        if steps:
            end = base + left.shape.flat_len + right.shape.flat_len
            self.live.splice(base, end, shape.flatten().codes)
        if left.v_iv is None:
            v_iv = right.v_iv
        elif right.v_iv is None:
            v_iv = left.v_iv
        else:
            v_iv = (left.v_iv[0], right.v_iv[1])
        run = _Run(left.lo, right.hi, v_iv, shape)
        self._debug_check_run(run)
        return run

    def _debug_check_run(self, run: _Run) -> None:
        if not _config.debug_checks:
            return
        source = Word(self.codes[run.lo : run.hi + 1])
        expect, _desc = daf(source, self.w, run.lo)
        if expect != run.shape.flatten():
            raise ShapeMismatch(
                f"materialized form for w[{run.lo}..{run.hi}] diverges from its dyadic form"
            )

    # -- main loop ---------------------------------------------------------

    def run(self) -> ReduceReport:
        n = self.n
        for _ in range(n // 2):
            self.step()
        final = self.live.codes()
        cost = emit_shuffle_to(self.tb, 0, final, ())
        self.buckets["alg1_final"] = cost
        self.live.splice(0, len(final), ())
        _config.check_cost("bucket_s_shuffle", self.buckets["s_shuffle"], 5 * n * n // 2)
        _config.check_cost("bucket_alg5", self.buckets["alg5"], 15 * n * n + 2 * n)
        _config.check_cost("bucket_alg2", self.buckets["alg2"], 2176 * n * (4 * n - 1))
        _config.check_cost("bucket_alg1_final", self.buckets["alg1_final"], 100 * n * n)
        total = self.tb.cost
        _config.check_cost("total", total, cost_bound(n))
        if sum(self.buckets.values()) != total:
            raise ShapeMismatch("cost buckets do not sum to the trace cost")
        return ReduceReport(
            trace=self.tb.build(self.w),
            n=n,
            cost=total,
            bound=cost_bound(n),
            buckets=dict(self.buckets),
            boundary_lengths=self.boundary_lengths,
            max_boundary_length=max(self.boundary_lengths, default=0),
        )


def reduce_report(w: Word) -> ReduceReport:
    """Reduce a null-homotopic word to ε; trace plus cost accounting."""
    if not decide_identity(w):
        raise NotNullHomotopic(f"word does not represent the identity: {w}")
    return _Reducer(w).run()


def reduce_to_empty(w: Word) -> Trace:
    """A verified-replayable trace from w to ε with cost within the
    quadratic budget; requires decide_identity(w)."""
    return reduce_report(w).trace


def area_report(w: Word) -> AreaReport:
    """Reduce, replay through the verifier, and report the measured cost
    (an upper bound on the area of w), the closed-form budget, and the
    maximum intermediate word length."""
    rep = reduce_report(w)
    check = verify_trace(rep.trace)
    if check.end != EPSILON or check.cost != rep.cost:
        raise ShapeMismatch("verifier disagrees with the reduction engine")
    return AreaReport(
        n=rep.n,
        cost=check.cost,
        bound=rep.bound,
        max_intermediate_length=check.max_len,
    )
