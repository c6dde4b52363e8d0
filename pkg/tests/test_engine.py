import random

import pytest

from stallings.cli import MODES, default_profile, generate
from stallings.engine import (
    area_report,
    cost_bound,
    decide_identity,
    find_xy,
    reduce_report,
    reduce_to_empty,
)
from stallings.errors import NotBalanced, NotNullHomotopic, TooShort
from stallings.rewriting import verify_trace
from stallings.words import EPSILON, Word, parse_word

W = parse_word


def test_decide_identity_examples():
    assert decide_identity(W("ACac"))
    assert decide_identity(W("SbAsaB"))
    assert not decide_identity(W("AsaS"))
    assert decide_identity(EPSILON)
    assert decide_identity(W("saBSbA"))
    assert not decide_identity(W("a"))
    assert not decide_identity(W("sabSBA"))  # pinch blocked by ξ(ab) = 2


def test_find_xy_examples():
    assert find_xy(W("sS")) == (1, 2)
    assert find_xy(W("aBsS")) == (1, 2)
    assert find_xy(W("asSA")) == (2, 3)
    with pytest.raises(TooShort):
        find_xy(W("a"))
    with pytest.raises(NotBalanced):
        find_xy(W("ab"))


def test_reduce_examples():
    rep = reduce_report(EPSILON)
    assert rep.cost == 0 and len(rep.trace) == 0

    t = reduce_to_empty(W("aA"))
    out = verify_trace(t)
    assert out.end == EPSILON and out.cost == t.cost

    rep = reduce_report(W("ACac"))
    out = verify_trace(rep.trace)
    assert out.end == EPSILON
    assert out.cost == rep.cost <= cost_bound(4)
    assert rep.cost >= 1  # a freely reduced nontrivial word needs a relator


def test_reduce_rejects_nontrivial():
    with pytest.raises(NotNullHomotopic):
        reduce_to_empty(W("a"))
    with pytest.raises(NotNullHomotopic):
        reduce_to_empty(W("AsaS"))


def test_iteration_count_and_boundaries():
    for text in ("aA", "ACac", "saBSbA", "ACacBDbd", "ssSS"):
        w = W(text)
        rep = reduce_report(w)
        assert len(rep.boundary_lengths) == rep.n // 2
        assert rep.max_boundary_length <= 10 * rep.n
        assert sum(rep.buckets.values()) == rep.cost


def test_bucket_bounds():
    rng = random.Random(73)
    for _ in range(40):
        n = rng.choice((8, 16, 32, 64))
        mode = MODES[rng.randrange(3)]
        w = generate(default_profile(mode, n, rng.randrange(1000)), n)
        rep = reduce_report(w)
        m = rep.n
        assert rep.buckets["s_shuffle"] <= 5 * m * m // 2
        assert rep.buckets["alg5"] <= 15 * m * m + 2 * m
        assert rep.buckets["alg2"] <= 2176 * m * (4 * m - 1)
        assert rep.buckets["alg1_final"] <= 100 * m * m
        assert rep.cost <= rep.bound == cost_bound(m)


def test_area_report():
    rep = area_report(EPSILON)
    assert rep.n == 0 and rep.cost == 0

    rep = area_report(W("ACac"))
    assert rep.cost >= 1 and rep.cost <= rep.bound

    w = generate(default_profile("conjugates", 64, 5), 64)
    rep = area_report(w)
    assert rep.cost <= cost_bound(rep.n)
    assert rep.max_intermediate_length >= rep.n


def test_decider_matches_reduction_sampled():
    rng = random.Random(79)
    agree = 0
    for _ in range(150):
        if rng.random() < 0.5:
            n = rng.choice((4, 8, 16, 32))
            w = generate(default_profile(MODES[rng.randrange(3)], n, rng.randrange(500)), n)
        else:
            w = Word([rng.randrange(10) for _ in range(rng.randrange(0, 33, 2))])
        claimed = decide_identity(w)
        try:
            t = reduce_to_empty(w)
            ok = verify_trace(t).end == EPSILON
        except NotNullHomotopic:
            ok = False
        assert claimed == ok
        agree += 1
    assert agree == 150


def test_pure_s_words():
    for text in ("sS", "ssSS", "sSsS", "SsSs"):
        rep = reduce_report(W(text))
        assert rep.cost == 0
        assert verify_trace(rep.trace).end == EPSILON
