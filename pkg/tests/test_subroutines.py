import random

import pytest

from stallings.altform import AltShape, daf, make_piece, paf, paf_shape
from stallings.dyadic import mdc
from stallings.errors import BadXY, IndexOutOfRange, NotAdjacent, PositionMismatch
from stallings.fxf import fxf_equal
from stallings.rewriting import verify_trace
from stallings.subroutines import (
    MergeContext,
    alg2_merge_pieces,
    alg3_merge_daf,
    alg4_pass_c,
    alg5_assimilate_I,
    alg6_assimilate_II,
)
from stallings.words import EPSILON, Word, exponent_sum, parse_word

W = parse_word


def _random_balanced(rng, max_pairs):
    codes = []
    for _ in range(rng.randrange(0, max_pairs + 1)):
        codes.append(rng.choice((0, 2, 4, 6)))
        codes.append(rng.choice((1, 3, 5, 7)))
    rng.shuffle(codes)
    return Word(codes)


def _random_partition(rng, n):
    lengths = []
    left = n
    while left > 0:
        take = rng.randrange(1, left + 1)
        lengths.append(take)
        left -= take
    return lengths


# ---------------------------------------------------------------------------
# Piece merge
# ---------------------------------------------------------------------------


def test_alg2_examples():
    sh = paf_shape(W("bD"), [1, 1])
    res = alg2_merge_pieces(sh, 0)
    rep = verify_trace(res.trace)
    assert rep.end == paf(W("bD"), [2]) == res.shape.flatten()
    assert rep.cost == res.cost <= 136 * (2 + 0) ** 2

    sh = paf_shape(W("aA"), [1, 1])
    res = alg2_merge_pieces(sh, 0)
    rep = verify_trace(res.trace)
    assert rep.end == paf(W("aA"), [2])
    assert fxf_equal(rep.end, W("aA"))

    with pytest.raises(IndexOutOfRange):
        alg2_merge_pieces(paf_shape(W("aA"), [2]), 0)


def test_alg2_random_merges():
    rng = random.Random(51)
    for _ in range(200):
        v = _random_balanced(rng, 10)
        if len(v) < 2:
            continue
        part = _random_partition(rng, len(v))
        while len(part) < 2:
            part = _random_partition(rng, len(v))
        sh = paf_shape(v, part)
        i = rng.randrange(len(part) - 1)
        res = alg2_merge_pieces(sh, i)
        rep = verify_trace(res.trace)
        merged_part = part[:i] + [part[i] + part[i + 1]] + part[i + 2 :]
        assert rep.end == paf(v, merged_part) == res.shape.flatten()
        xi_before = exponent_sum(Word(v.codes[: sum(part[:i])]))
        assert rep.cost <= 136 * (part[i] + part[i + 1] + abs(xi_before)) ** 2


# ---------------------------------------------------------------------------
# Dyadic merge
# ---------------------------------------------------------------------------


def _daf_at(host, lo, hi):
    v = Word(host.codes[lo : hi + 1])
    return v, daf(v, host, lo)


def test_alg3_examples():
    host = W("aAbB")
    u, (wu, du) = host[0:2], daf(W("aA"), W("aAbB"), 0)
    v, (wv, dv) = host[2:4], daf(W("bB"), W("aAbB"), 2)
    res = alg3_merge_daf(MergeContext(W("aA"), W("bB"), du, dv))
    rep = verify_trace(res.trace)
    expected, _ = daf(W("aAbB"), host, 0)
    assert rep.end == expected == res.shape.flatten()

    # degenerate: one side empty
    we, de = daf(EPSILON, host, 0)
    res = alg3_merge_daf(MergeContext(EPSILON, W("bB"), de, dv))
    assert len(res.trace) == 0 and res.shape.flatten() == wv

    with pytest.raises(NotAdjacent):
        frag1 = daf(W("aA"), host, 0)[1]
        frag2 = daf(W("bB"), W("aAcCbB"), 4)[1]
        MergeContext(W("aA"), W("bB"), frag1, frag2)


def test_alg3_fig2_geometry():
    """Merging adjacent subwords occupying [5,20] ends at the five-piece
    cover (1,2,8,4,1), whatever even split the two subwords realize.

    (Balanced subwords have even stripped length, so a 3|13 split of the
    16 positions is not realizable; every even split is exercised.)
    """
    rng = random.Random(53)
    for left_len in (2, 4, 8, 12, 14):
        u = _random_balanced(rng, left_len)
        while len(u) != left_len:
            u = _random_balanced(rng, left_len)
        v = _random_balanced(rng, 16 - left_len)
        while len(v) != 16 - left_len:
            v = _random_balanced(rng, 16 - left_len)
        host = Word((2,) * 5 + u.codes + v.codes + (3,) * 2)
        _wu, du = daf(u, host, 5)
        _wv, dv = daf(v, host, 5 + left_len)
        res = alg3_merge_daf(MergeContext(u, v, du, dv))
        rep = verify_trace(res.trace)
        expected, desc = daf(u + v, host, 5)
        assert rep.end == expected == res.shape.flatten()
        assert [d.size for d in desc.partition] == [1, 2, 8, 4, 1]
        lefts = [(s.left.r, s.left.j) for s in res.steps]
        assert len(lefts) == len(set(lefts))
        for s in res.steps:
            assert s.left.size == s.right.size
            # the merged interval straddles the boundary between u and v
            m = s.merged
            assert not (m.hi <= 4 + left_len) and not (m.lo >= 5 + left_len)


def test_alg3_random():
    rng = random.Random(59)
    for _ in range(120):
        u = _random_balanced(rng, 8)
        v = _random_balanced(rng, 8)
        pre = rng.randrange(0, 12)
        host = Word((4,) * pre + u.codes + v.codes + (5,) * rng.randrange(0, 4))
        _wu, du = daf(u, host, pre)
        _wv, dv = daf(v, host, pre + len(u))
        res = alg3_merge_daf(MergeContext(u, v, du, dv))
        rep = verify_trace(res.trace)
        expected, _ = daf(u + v, host, pre)
        assert rep.end == expected == res.shape.flatten()
        for s in res.steps:
            assert s.left.size == s.right.size
        lefts = [(s.left.r, s.left.j) for s in res.steps]
        assert len(lefts) == len(set(lefts))


# ---------------------------------------------------------------------------
# c-sweep
# ---------------------------------------------------------------------------


def test_alg4_examples():
    res = alg4_pass_c(AltShape(()), 1)
    rep = verify_trace(res.trace)
    assert rep.end == EPSILON and rep.cost == 0

    piece = make_piece((), 1, 0)
    sh = AltShape((piece,))
    res = alg4_pass_c(sh, 1)
    rep = verify_trace(res.trace)
    assert rep.end == W("cAcAaC") == res.shape.flatten()
    assert fxf_equal(rep.end, W("c") + sh.flatten() + W("C"))
    assert rep.cost <= 2 * 1 + sh.flat_len

    res = alg4_pass_c(sh, -1)
    rep = verify_trace(res.trace)
    assert rep.end == W("cA") == res.shape.flatten()
    assert fxf_equal(rep.end, W("C") + sh.flatten() + W("c"))


def test_alg4_random_shapes():
    rng = random.Random(61)
    for _ in range(250):
        v = _random_balanced(rng, 10)
        part = _random_partition(rng, len(v)) if len(v) else []
        sh = paf_shape(v, part)
        # randomly perturbed exponents still make a legal input form
        pieces = tuple(
            p.with_exponents(p.alpha + rng.randrange(-2, 3), p.beta + rng.randrange(-2, 3))
            for p in sh.pieces
        )
        sh = AltShape(pieces, last_beta_omitted=False)
        eps = rng.choice((1, -1))
        res = alg4_pass_c(sh, eps)
        rep = verify_trace(res.trace)
        assert rep.end == res.shape.flatten()
        assert rep.cost == res.cost <= 2 * sh.k + sh.flat_len
        start = res.trace.start
        assert fxf_equal(rep.end, start)
        for old, new in zip(sh.pieces, res.shape.pieces):
            assert new.alpha == old.alpha + eps and new.beta == old.beta + eps


# ---------------------------------------------------------------------------
# Assimilation
# ---------------------------------------------------------------------------


def test_alg5_examples():
    res = alg5_assimilate_I(W("a"), AltShape(()), W("A"))
    rep = verify_trace(res.trace)
    assert rep.end == paf(W("aA"), [1, 1]) == res.shape.flatten()
    assert rep.cost <= 4

    res = alg5_assimilate_I(W("c"), AltShape(()), W("C"))
    rep = verify_trace(res.trace)
    assert rep.end == paf(W("cC"), [1, 1])

    with pytest.raises(BadXY):
        alg5_assimilate_I(W("a"), AltShape(()), W("b"))
    with pytest.raises(BadXY):
        alg5_assimilate_I(W("s"), AltShape(()), W("S"))


def test_alg5_all_flank_pairs_and_random_middles():
    rng = random.Random(67)
    for xc in range(8):
        for ygen in range(4):
            yc = 2 * ygen + (1 - (xc & 1))
            for _ in range(6):
                v = _random_balanced(rng, 6)
                pre = rng.randrange(0, 8)
                host = Word((6,) * pre + (xc,) + v.codes + (yc,) + (7,))
                _t, desc = daf(v, host, pre + 1)
                res = alg5_assimilate_I(Word((xc,)), desc.shape, Word((yc,)))
                rep = verify_trace(res.trace)
                tau_len = desc.shape.flat_len
                assert rep.cost == res.cost <= 3 * tau_len + 4
                assert rep.end == res.shape.flatten()
                # end word is the partitioned form of x v̂ y with the piece
                # partition (x)(dyadic pieces)(y)
                lengths = [1] + [d.size for d in desc.partition] + [1]
                expected = paf(Word((xc,) + v.codes + (yc,)), lengths)
                assert rep.end == expected
                assert res.shape.is_canonical()


def test_alg6_examples():
    # v empty: x at 0, y at 1 merge into one dyadic piece
    host = W("aA")
    _w, desc = daf(EPSILON, host, 1)
    res5 = alg5_assimilate_I(W("a"), desc.shape, W("A"))
    res6 = alg6_assimilate_II(res5.shape, desc, 0, 1)
    rep = verify_trace(res6.trace)
    expected, desc2 = daf(W("aA"), host, 0)
    assert rep.end == expected == res6.shape.flatten()
    assert [d.size for d in desc2.partition] == [2]

    # v of length 2 at [1,2], flanks at 0 and 3
    host = W("baBA")
    v = W("aB")
    _w, desc = daf(v, host, 1)
    res5 = alg5_assimilate_I(W("b"), desc.shape, W("A"))
    res6 = alg6_assimilate_II(res5.shape, desc, 0, 3)
    rep = verify_trace(res6.trace)
    expected, desc2 = daf(host, host, 0)
    assert rep.end == expected
    assert [d.span for d in desc2.partition] == [(0, 3)]

    # non-power-aligned flanks: v at [5,6], x at 4, y at 7 -> one piece [4,7]
    v = W("cD")
    host = Word((0,) * 4 + (6,) + v.codes + (7,))
    _w, desc = daf(v, host, 5)
    res5 = alg5_assimilate_I(W("d"), desc.shape, W("D"))
    res6 = alg6_assimilate_II(res5.shape, desc, 4, 7)
    rep = verify_trace(res6.trace)
    expected, desc2 = daf(Word((6,) + v.codes + (7,)), host, 4)
    assert rep.end == expected
    assert [d.span for d in desc2.partition] == [(4, 7)]

    with pytest.raises(PositionMismatch):
        alg6_assimilate_II(res5.shape, desc, 3, 7)


def test_alg6_random():
    rng = random.Random(71)
    for _ in range(150):
        v = _random_balanced(rng, 8)
        pre = rng.randrange(0, 10)
        xc = rng.choice((0, 2, 4, 6))
        yc = rng.choice((1, 3, 5, 7))
        host = Word((0,) * pre + (xc,) + v.codes + (yc,) + (1,) * rng.randrange(0, 3))
        _t, desc = daf(v, host, pre + 1)
        res5 = alg5_assimilate_I(Word((xc,)), desc.shape, Word((yc,)))
        res6 = alg6_assimilate_II(res5.shape, desc, pre, pre + 1 + len(v))
        rep = verify_trace(res6.trace)
        expected, _ = daf(Word((xc,) + v.codes + (yc,)), host, pre)
        assert rep.end == expected == res6.shape.flatten()
        for s in res6.steps:
            assert s.left.size == s.right.size
        lefts = [(s.left.r, s.left.j) for s in res6.steps]
        assert len(lefts) == len(set(lefts))
