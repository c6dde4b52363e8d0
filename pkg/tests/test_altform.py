import random

import pytest

from stallings.altform import (
    AltShape,
    daf,
    is_alternating,
    is_balanced,
    make_piece,
    paf,
    paf_shape,
    paf_trace,
)
from stallings.errors import BadPartition, NotBalanced, PositionMismatch
from stallings.fxf import fxf_equal
from stallings.rewriting import verify_trace
from stallings.words import EPSILON, Word, exponent_sum, parse_word, strip_s

W = parse_word
ABCD = (0, 1, 2, 3, 4, 5, 6, 7)


def test_is_alternating():
    assert is_alternating(W("aB"))
    assert is_alternating(EPSILON)
    assert not is_alternating(W("aBc"))
    assert is_alternating(W("aAcC"))
    assert not is_alternating(W("Ba"))
    assert not is_alternating(W("sS"))


def test_is_balanced():
    assert is_balanced(W("aB"))
    assert not is_balanced(W("ab"))
    assert is_balanced(W("saBS"))
    assert not is_balanced(W("AsaS"))
    assert is_balanced(EPSILON)
    assert is_balanced(W("saBSbA"))
    assert not is_balanced(W("sabS"))  # pinch blocked: ab has exponent sum 2


def test_paf_examples():
    assert paf(EPSILON, []) == EPSILON
    assert paf(W("bD"), [2]) == W("bCcAaD")
    assert paf(W("aC"), [2]) == W("aCcAaC")
    assert paf(W("aA"), [1, 1]) == W("aCcAaCcA")
    assert paf(W("aA"), [2]) == W("aCcA")


def test_paf_errors():
    with pytest.raises(NotBalanced):
        paf(W("ab"), [2])
    with pytest.raises(NotBalanced):
        paf(W("saBS"), [4])
    with pytest.raises(BadPartition):
        paf(W("aB"), [1])


def _random_balanced(rng, max_len):
    n = rng.randrange(0, max_len // 2 + 1)
    codes = []
    for _ in range(n):
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


def test_paf_alternating_and_equal_random():
    rng = random.Random(19)
    for _ in range(300):
        v = _random_balanced(rng, 24)
        part = _random_partition(rng, len(v))
        out = paf(v, part)
        assert is_alternating(out)
        assert fxf_equal(out, v)


def test_paf_trace_examples_and_random():
    for v, part in [(EPSILON, []), (W("bD"), [2]), (W("aC"), [2])]:
        t = paf_trace(v, part)
        rep = verify_trace(t)
        assert rep.end == paf(v, part)
    rng = random.Random(29)
    for _ in range(120):
        v = _random_balanced(rng, 20)
        part = _random_partition(rng, len(v))
        t = paf_trace(v, part)
        rep = verify_trace(t)
        assert rep.end == paf(v, part)


def test_paf_prefix_locality():
    """The flattened prefix through piece i depends only on v_1..v_i."""
    rng = random.Random(31)
    for _ in range(80):
        v = _random_balanced(rng, 20)
        if len(v) < 4:
            continue
        cut = rng.randrange(2, len(v), 2)
        head = v.codes[:cut]
        xi_head = exponent_sum(Word(head))
        comp = tuple((1 if xi_head > 0 else 0,) * abs(xi_head))
        part_head = _random_partition(rng, cut)
        # two different continuations, each restoring exponent sum zero
        shapes = []
        for _ in range(2):
            tail = _random_balanced(rng, 16).codes + comp
            whole = Word(head + tail)
            part = part_head + _random_partition(rng, len(tail))
            shapes.append(paf_shape(whole, part))
        i = len(part_head)
        a = [p.flat_codes() for p in shapes[0].pieces[:i]]
        b = [p.flat_codes() for p in shapes[1].pieces[:i]]
        assert a == b


def test_exp_sum_bounds_on_dyadic_partition():
    """|ξ(v_1..v_i)| < 2ℓ(v_i) and |ξ(v_1..v_{i-1} λ_i)| < 2ℓ(v_i)."""
    rng = random.Random(37)
    for _ in range(300):
        v = _random_balanced(rng, 64)
        if len(v) == 0:
            continue
        offset = rng.randrange(0, 40)
        host = Word((0,) * offset + v.codes)
        _w, desc = daf(v, host, offset)
        running = 0
        for piece in desc.shape.pieces:
            with_lam = running + sum(1 if (c & 1) == 0 else -1 for c in piece.lam)
            full = running + sum(1 if (c & 1) == 0 else -1 for c in piece.source)
            assert abs(full) < 2 * len(piece.source)
            assert abs(with_lam) < 2 * len(piece.source)
            running = full


def test_daf_examples():
    word, desc = daf(EPSILON, W("ab"), 1)
    assert word == EPSILON and desc.host_positions is None

    word, desc = daf(W("bD"), W("bD"), 0)
    assert desc.host_positions == (0, 1)
    assert [d.size for d in desc.partition] == [2]
    assert word == paf(W("bD"), [2])

    # positions [5, 20] reproduce the five-piece dyadic split
    rng = random.Random(41)
    v = _random_balanced(rng, 16)
    while len(v) != 16:
        v = _random_balanced(rng, 16)
    host = Word((0,) * 5 + v.codes + (1,) * 3)
    word, desc = daf(v, host, 5)
    assert [d.size for d in desc.partition] == [1, 2, 8, 4, 1]
    assert fxf_equal(word, v)
    assert len(word) <= 10 * len(v)


def test_daf_respects_s_letters_in_host_and_subword():
    # s letters occupy no stripped positions
    v = W("saBS")
    host = W("c") + v + W("C")
    word, desc = daf(v, host, 1)
    assert desc.host_positions == (1, 2)
    assert word == paf(W("aB"), [1, 1])  # positions 1, 2 are two dyadic pieces
    assert exponent_sum(word) == 0
    assert strip_s(v) == W("aB")


def test_daf_errors():
    with pytest.raises(PositionMismatch):
        daf(W("aB"), W("ab"), 0)
    with pytest.raises(NotBalanced):
        daf(W("ab"), W("ab"), 0)


def test_daf_length_bound_random():
    rng = random.Random(43)
    for _ in range(200):
        v = _random_balanced(rng, 128)
        offset = rng.randrange(0, 64)
        host = Word((2,) * offset + v.codes + (3,) * rng.randrange(0, 8))
        word, _ = daf(v, host, offset)
        assert len(word) <= 10 * len(v)


def test_shape_bookkeeping():
    sh = paf_shape(W("abBAcdDC"), [3, 2, 3])
    assert sh.k == 3
    assert sh.is_canonical()
    assert sh.flat_len == len(sh.flatten())
    offs = sh.piece_offsets()
    assert offs[0] == 0 and offs[-1] == sh.flat_len
    flat = sh.flatten().codes
    for i, p in enumerate(sh.pieces):
        assert flat[offs[i] : offs[i + 1]] == p.flat_codes()
    assert sh.source_word() == W("abBAcdDC")


def test_make_piece_segments():
    p = make_piece(W("aC").codes, alpha=1, beta=1)
    r0, ca, sg, ac, end = p.segment_offsets()
    assert (r0, ca, sg, ac, end) == (0, 2, 4, 6, 8)
    assert p.flat_codes() == W("aCcAaCaC").codes
