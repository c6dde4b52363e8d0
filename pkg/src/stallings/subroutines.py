"""Trace-emitting subroutines over alternating forms.

Five operations, each emitting a verified move sequence and asserting its
relator count against the bound its contract guarantees:

  * merge two adjacent pieces of a partitioned alternating form
    (window rewrite via the shuffle algorithm);
  * merge two adjacent dyadic alternating subwords (a schedule of piece
    merges along the dyadic cover of the union);
  * sweep a c^{±1} through an alternating shape, incrementing every
    connector exponent (linear cost);
  * assimilate flanking letters x, y into a dyadic alternating word,
    first to a partitioned form (cost ≤ 3ℓ(τ)+4) and then onward to the
    dyadic form of the extended subword.

Emitters write moves into a caller-supplied builder at an absolute offset,
so the engine can run them against windows of its live word; the public
wrappers build standalone traces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _config
from .altform import AltShape, DafDescriptor, ShapePiece, block_codes, make_piece
from .dyadic import (
    DyadicInterval,
    Interval,
    MergeStep,
    merge_sequence_pair,
    merge_sequence_point,
)
from .errors import (
    BadXY,
    IndexOutOfRange,
    NotAdjacent,
    NotBalanced,
    PositionMismatch,
    ShapeMismatch,
)
from .fxf import emit_shuffle_to
from .rewriting import KIND_E, KIND_F, KIND_R, Trace, TraceBuilder, _table, swap_pair_id
from .words import Word, exponent_sum

__all__ = [
    "MergeContext",
    "SubroutineResult",
    "alg2_merge_pieces",
    "alg3_merge_daf",
    "alg4_pass_c",
    "alg5_assimilate_I",
    "alg6_assimilate_II",
]


@dataclass(frozen=True)
class SubroutineResult:
    trace: Trace
    shape: AltShape
    cost: int
    steps: tuple[MergeStep, ...] = ()


@dataclass(frozen=True)
class MergeContext:
    """Two balanced words adjacent inside a host, with their dyadic forms."""

    u: Word
    v: Word
    left: DafDescriptor
    right: DafDescriptor

    def __post_init__(self):
        lu, rv = self.left.host_positions, self.right.host_positions
        if lu is not None and rv is not None and rv[0] != lu[1] + 1:
            raise NotAdjacent(f"host intervals {lu} and {rv} do not abut")
        if exponent_sum(self.u) != 0 or exponent_sum(self.v) != 0:
            raise NotBalanced("merge context words must be balanced")


# ---------------------------------------------------------------------------
# Piece merging
# ---------------------------------------------------------------------------


def _emit_alg2(tb: TraceBuilder, base: int, shape: AltShape, i: int) -> tuple[int, AltShape]:
    """Rewrite the window of pieces i, i+1 into the merged piece."""
    if not 0 <= i <= shape.k - 2:
        raise IndexOutOfRange(f"piece index {i} with k={shape.k}")
    if _config.debug_checks and not shape.is_canonical():
        raise ShapeMismatch("piece merge requires a canonical partitioned form")
    offs = shape.piece_offsets()
    left, right = shape.pieces[i], shape.pieces[i + 1]
    cur = left.flat_codes() + right.flat_codes()
    xi_before = shape.xi_prefix(i)
    merged = make_piece(
        left.source + right.source,
        alpha=xi_before + _xi_codes(left.lam) + _xi_codes(right.lam),
        beta=right.beta,
    )
    cost = emit_shuffle_to(tb, base + offs[i], cur, merged.flat_codes())
    bound = 136 * (len(left.source) + len(right.source) + abs(xi_before)) ** 2
    _config.check_cost("alg2", cost, bound)
    new_shape = AltShape(
        shape.pieces[:i] + (merged,) + shape.pieces[i + 2 :],
        last_beta_omitted=shape.last_beta_omitted,
    )
    return cost, new_shape


def _xi_codes(codes) -> int:
    return sum(1 if (c & 1) == 0 else -1 for c in codes)


def alg2_merge_pieces(shape: AltShape, i: int) -> SubroutineResult:
    """Merge pieces i and i+1 (0-based) of a canonical partitioned form.

    Only the window spanning the two pieces is rewritten; the cost is at
    most 136·(ℓ(vᵢvᵢ₊₁) + |ξ(v₁…vᵢ₋₁)|)².
    """
    tb = TraceBuilder()
    cost, new_shape = _emit_alg2(tb, 0, shape, i)
    return SubroutineResult(tb.build(shape.flatten()), new_shape, cost)


def _run_merge_steps(
    tb: TraceBuilder,
    base: int,
    shape: AltShape,
    steps: list[MergeStep],
    charged: set[tuple[int, int]],
) -> tuple[int, AltShape]:
    """Execute a dyadic merge schedule as piece merges, charging each step
    to its left dyadic interval (no interval is ever charged twice)."""
    total = 0
    for step in steps:
        theta = step.left
        cost, shape = _emit_alg2(tb, base, shape, step.k)
        _config.check_cost("alg2_in_merge", cost, 2176 * theta.size * theta.size)
        key = (theta.r, theta.j)
        if key in charged:
            raise ShapeMismatch(f"dyadic interval {theta} charged twice")
        charged.add(key)
        total += cost
    return total, shape


def _emit_alg3(
    tb: TraceBuilder,
    base: int,
    left_shape: AltShape,
    right_shape: AltShape,
    u_iv: Interval | None,
    v_iv: Interval | None,
    charged: set[tuple[int, int]],
) -> tuple[int, AltShape, list[MergeStep]]:
    if u_iv is None:
        return 0, right_shape, []
    if v_iv is None:
        return 0, left_shape, []
    combined = AltShape(left_shape.pieces + right_shape.pieces)
    steps = merge_sequence_pair(u_iv, v_iv)
    cost, shape = _run_merge_steps(tb, base, combined, steps, charged)
    return cost, shape, steps


def alg3_merge_daf(ctx: MergeContext) -> SubroutineResult:
    """Merge two adjacent dyadic alternating subwords into the dyadic form
    of their concatenation.  Each piece merge in the schedule costs at most
    2176·ℓ(θ)² where θ is the left merged piece."""
    tb = TraceBuilder()
    charged: set[tuple[int, int]] = set()
    cost, shape, steps = _emit_alg3(
        tb,
        0,
        ctx.left.shape,
        ctx.right.shape,
        ctx.left.host_positions,
        ctx.right.host_positions,
        charged,
    )
    start = ctx.left.shape.flatten() + ctx.right.shape.flatten()
    return SubroutineResult(tb.build(start), shape, cost, tuple(steps))


# ---------------------------------------------------------------------------
# Sweeping a c^{±1} through a shape
# ---------------------------------------------------------------------------


def _emit_carried_pass(tb: TraceBuilder, p: int, carried: int, codes) -> int:
    """Move the carried letter rightward past ``codes`` starting at position
    p: one relator per commuting letter, free moves past the same
    generator.  Returns the relator count; the carried letter ends at
    p + len(codes)."""
    n = len(codes)
    if n == 0:
        return 0
    arr = np.frombuffer(bytes(codes), dtype=np.int8)
    sw = _table().swap[carried, arr]
    same_gen = (arr >> 1) == (carried >> 1)
    same = arr == np.int8(carried)
    opp = same_gen & ~same
    commuting = ~same_gen
    if np.any(commuting & (sw < 0)):
        raise ShapeMismatch("carried letter cannot pass a non-commuting letter")
    counts = np.where(opp, 2, np.where(same, 0, 1))
    total = int(counts.sum())
    if total == 0:
        return 0
    starts = np.cumsum(counts) - counts
    kinds = np.empty(total, dtype=np.int8)
    poss = np.empty(total, dtype=np.int64)
    args = np.empty(total, dtype=np.int32)
    letter_pos = p + np.arange(n, dtype=np.int64)
    idx = starts[commuting]
    kinds[idx] = KIND_R
    poss[idx] = letter_pos[commuting]
    args[idx] = sw[commuting]
    idx = starts[opp]
    kinds[idx] = KIND_F
    poss[idx] = letter_pos[opp]
    args[idx] = 0
    kinds[idx + 1] = KIND_E
    poss[idx + 1] = letter_pos[opp]
    args[idx + 1] = carried ^ 1
    tb.extend(kinds, poss, args)
    return int(np.count_nonzero(commuting))


_SWAP_CA = (1, 5)  # lhs (a⁻¹ c⁻¹) -> (c⁻¹ a⁻¹)
_SWAP_AC = (5, 1)  # lhs (c⁻¹ a⁻¹) -> (a⁻¹ c⁻¹)


def _emit_replacement(tb: TraceBuilder, p: int, eps: int, insert_gen: int) -> int:
    """Replace the carried letter at p by (g·h⁻¹)^eps · carried', leaving the
    inserted factor at (p, p+1) and the new carried letter at p+2.
    ``insert_gen`` is 0 to insert a-letters (c-replacement) or 4 for
    c-letters (a-replacement).  Costs 1 exactly when eps = -1."""
    if eps == 1:
        tb.append_free_expand(p + 1, insert_gen ^ 1)
        return 0
    tb.append_free_expand(p, insert_gen)
    lhs = (insert_gen ^ 1, 5 if insert_gen == 0 else 1)
    tb.append_relator(p + 1, swap_pair_id(*lhs))
    return 1


def _emit_alg4(tb: TraceBuilder, base: int, shape: AltShape, eps: int) -> tuple[int, AltShape]:
    """Sweep; the word at [base, base+2+ℓ(τ)) is c^eps · flatten · c^{-eps}."""
    if eps not in (1, -1):
        raise ShapeMismatch(f"exponent must be ±1, got {eps}")
    carried_c = 4 if eps == 1 else 5
    carried_a = 0 if eps == 1 else 1
    p = base
    cost = 0
    for piece in shape.pieces:
        cost += _emit_carried_pass(tb, p, carried_c, piece.rho)
        p += len(piece.rho)
        cost += _emit_replacement(tb, p, eps, insert_gen=0)
        block_pos, p = p, p + 2
        blk = block_codes("ca", piece.alpha)
        cost += _emit_carried_pass(tb, p, carried_a, blk)
        p += len(blk)
        if piece.alpha != 0 and (piece.alpha > 0) != (eps > 0):
            tb.append_free_reduce(block_pos + 1)
            tb.append_free_reduce(block_pos)
            p -= 4
        cost += _emit_carried_pass(tb, p, carried_a, piece.sigma)
        p += len(piece.sigma)
        cost += _emit_replacement(tb, p, eps, insert_gen=4)
        block_pos, p = p, p + 2
        blk = block_codes("ac", piece.beta)
        cost += _emit_carried_pass(tb, p, carried_c, blk)
        p += len(blk)
        if piece.beta != 0 and (piece.beta > 0) != (eps > 0):
            tb.append_free_reduce(block_pos + 1)
            tb.append_free_reduce(block_pos)
            p -= 4
    tb.append_free_reduce(p)
    _config.check_cost("alg4", cost, 2 * shape.k + shape.flat_len)
    new_shape = AltShape(
        tuple(q.with_exponents(q.alpha + eps, q.beta + eps) for q in shape.pieces),
        last_beta_omitted=False,
    )
    return cost, new_shape


def alg4_pass_c(shape: AltShape, eps: int) -> SubroutineResult:
    """Convert c^eps · τ · c^{-eps} to τ with every connector exponent
    incremented by eps; cost at most 2k + ℓ(τ)."""
    tb = TraceBuilder()
    cost, new_shape = _emit_alg4(tb, 0, shape, eps)
    start_codes = (
        ((4,) if eps == 1 else (5,))
        + shape.flatten().codes
        + ((5,) if eps == 1 else (4,))
    )
    return SubroutineResult(tb.build(Word(start_codes)), new_shape, cost)


# ---------------------------------------------------------------------------
# Assimilating flanking letters
# ---------------------------------------------------------------------------

# Move templates rewriting a single letter x into
#   ρ₀ (ca⁻¹)^{ξ(λ₀)} σ₀ (ac⁻¹)^{ξ(x)} · c^{ξ(x)}
# and a single letter y into
#   c^{ξ(y)} · ρ (ca⁻¹)^{ξ(y,ab)+...} σ  (the matching trailing piece).
# Each op is (kind, relative position, letter code or swap lhs).

_X_TEMPLATES: dict[int, tuple[tuple, ...]] = {
    0: (("E", 1, 5), ("E", 3, 1), ("E", 5, 5)),
    2: (("E", 1, 5), ("E", 3, 1), ("E", 5, 5)),
    1: (("E", 0, 4), ("R", 1, (5, 1)), ("E", 2, 0), ("E", 3, 5)),
    3: (("E", 0, 4), ("R", 1, (5, 3)), ("E", 2, 0), ("E", 3, 5)),
    4: (("E", 1, 1), ("E", 3, 5)),
    6: (("E", 1, 1), ("E", 3, 5)),
    5: (("E", 0, 0), ("R", 1, (1, 5)), ("E", 2, 4), ("R", 3, (5, 1))),
    7: (("E", 0, 0), ("R", 1, (1, 7)), ("E", 2, 4), ("R", 3, (5, 1))),
}

_Y_TEMPLATES: dict[int, tuple[tuple, ...]] = {
    0: (("E", 0, 4), ("R", 1, (5, 0))),
    2: (("E", 0, 4), ("R", 1, (5, 2))),
    1: (("E", 0, 5),),
    3: (("E", 0, 5),),
    4: (("E", 1, 0), ("E", 2, 5)),
    6: (("E", 0, 0), ("R", 1, (1, 6)), ("E", 0, 4), ("R", 1, (5, 0))),
    5: (("E", 0, 5), ("E", 2, 1)),
    7: (("E", 0, 1), ("E", 0, 5)),
}


def _emit_template(tb: TraceBuilder, base: int, template) -> int:
    cost = 0
    for kind, rel, arg in template:
        if kind == "E":
            tb.append_free_expand(base + rel, arg)
        else:
            tb.append_relator(base + rel, swap_pair_id(*arg))
            cost += 1
    return cost


def _flank_pieces(xcode: int, ycode: int) -> tuple[ShapePiece, ShapePiece]:
    eps = 1 if (xcode & 1) == 0 else -1
    x_alpha = (1 if (xcode & 1) == 0 else -1) if xcode < 4 else 0
    x_piece = make_piece((xcode,), alpha=x_alpha, beta=eps)
    y_alpha = 0 if ycode < 4 else eps
    y_piece = make_piece((ycode,), alpha=y_alpha, beta=0)
    return x_piece, y_piece


def _emit_alg5(
    tb: TraceBuilder, base: int, xcode: int, shape: AltShape, ycode: int
) -> tuple[int, AltShape]:
    """Rewrite x · flatten(τ) · y at ``base`` into the partitioned form of
    x·v·y with partition (x)(v₁)…(v_k)(y)."""
    if xcode >= 8 or ycode >= 8 or (xcode & 1) == (ycode & 1):
        raise BadXY(f"invalid flanking letters {xcode}, {ycode}")
    eps = 1 if (xcode & 1) == 0 else -1
    x_piece, y_piece = _flank_pieces(xcode, ycode)
    ltau = shape.flat_len
    cost = _emit_template(tb, base, _X_TEMPLATES[xcode])
    x_flat = x_piece.flat_len
    cost += _emit_template(tb, base + x_flat + 1 + ltau, _Y_TEMPLATES[ycode])
    c4, mid_shape = _emit_alg4(tb, base + x_flat, shape, eps)
    cost += c4
    _config.check_cost("alg5", cost, 3 * ltau + 4)
    new_shape = AltShape((x_piece,) + mid_shape.pieces + (y_piece,))
    if _config.debug_checks and not new_shape.is_canonical():
        raise ShapeMismatch("assimilation produced a non-canonical form")
    return cost, new_shape


def alg5_assimilate_I(x, tau: AltShape, y) -> SubroutineResult:
    """Convert x·τ·y (x, y opposite-exponent letters of a..d flanking a
    dyadic alternating word) into the partitioned alternating form with
    partition (x)(v₁)…(v_k)(y); cost at most 3ℓ(τ) + 4."""
    xcode, ycode = _letter_code(x), _letter_code(y)
    tb = TraceBuilder()
    cost, new_shape = _emit_alg5(tb, 0, xcode, tau, ycode)
    start = Word((xcode,)) + tau.flatten() + Word((ycode,))
    return SubroutineResult(tb.build(start), new_shape, cost)


def _letter_code(x) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Word):
        if len(x) != 1:
            raise BadXY(f"expected a single letter, got {x!r}")
        return x.codes[0]
    return x.code  # Letter


def _emit_alg6(
    tb: TraceBuilder,
    base: int,
    bar_shape: AltShape,
    v_iv: Interval | None,
    x_pos: int,
    y_pos: int,
    charged: set[tuple[int, int]],
) -> tuple[int, AltShape, list[MergeStep]]:
    if v_iv is None:
        if y_pos != x_pos + 1:
            raise PositionMismatch(
                f"empty middle but flank positions {x_pos}, {y_pos} not adjacent"
            )
        steps1: list[MergeStep] = []
        steps2 = merge_sequence_point((x_pos, x_pos), "right")
    else:
        if x_pos != v_iv[0] - 1 or y_pos != v_iv[1] + 1:
            raise PositionMismatch(
                f"flank positions {x_pos}, {y_pos} do not bound {v_iv}"
            )
        steps1 = merge_sequence_point(v_iv, "left")
        steps2 = merge_sequence_point((x_pos, v_iv[1]), "right")
    shape = bar_shape
    cost = 0
    for step in steps1:
        if step.k != 0:
            raise ShapeMismatch("left absorption must merge the leftmost pieces")
        c, shape = _emit_alg2(tb, base, shape, 0)
        _config.check_cost("alg2_in_merge", c, 2176 * step.left.size * step.left.size)
        _charge(charged, step.left)
        cost += c
    for step in steps2:
        if step.k != shape.k - 2:
            raise ShapeMismatch("right absorption must merge the rightmost pieces")
        c, shape = _emit_alg2(tb, base, shape, step.k)
        _config.check_cost("alg2_in_merge", c, 2176 * step.left.size * step.left.size)
        _charge(charged, step.left)
        cost += c
    return cost, shape, steps1 + steps2


def _charge(charged: set[tuple[int, int]], theta: DyadicInterval) -> None:
    key = (theta.r, theta.j)
    if key in charged:
        raise ShapeMismatch(f"dyadic interval {theta} charged twice")
    charged.add(key)


def alg6_assimilate_II(
    bar_tau: AltShape, descriptor: DafDescriptor, x_pos: int, y_pos: int
) -> SubroutineResult:
    """Convert the partitioned form from the assimilation step into the
    dyadic alternating form of x·v·y, by absorbing x's position into the
    cover from the left and then y's from the right."""
    tb = TraceBuilder()
    charged: set[tuple[int, int]] = set()
    cost, shape, steps = _emit_alg6(
        tb, 0, bar_tau, descriptor.host_positions, x_pos, y_pos, charged
    )
    return SubroutineResult(tb.build(bar_tau.flatten()), shape, cost, tuple(steps))
