"""Command-line surface: generate, reduce, verify, decide, bench.

Null-homotopic inputs are produced by three generator profiles:

  conjugates        products of conjugated relators over all five generators
  nested_pinches    recursively nested s^e·β·s^{-e} pinches around balanced
                    words (stresses the dyadic machinery)
  commutator_heavy  s-free products of conjugated commutator relators

Generated words are freely reduced; the generator retries with more factors
until the reduced length lands in [n−8, n].  ``bench`` reduces and verifies
a grid of (length, seed) cells, writes one CSV row per cell, and reports
the least-squares slope of log(mean cost) against log(n).
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import _config
from .engine import area_report, cost_bound, decide_identity, reduce_report
from .errors import BadLength, StallingsError
from .rewriting import PRESENTATION, read_trace, verify_trace, write_trace
from .words import EPSILON, Word, parse_word, reduce_codes

MODES = ("conjugates", "nested_pinches", "commutator_heavy")


@dataclass(frozen=True)
class GenProfile:
    mode: str
    num_factors: int
    max_conjugator_length: int
    rng_seed: int


@dataclass(frozen=True)
class BenchRow:
    n: int
    seed: int
    cost: int
    bound: int
    max_len: int
    wall_time_ms: float


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

_ABCD = (0, 1, 2, 3, 4, 5, 6, 7)
_ALL = tuple(range(10))


def _inv(codes) -> list[int]:
    return [c ^ 1 for c in reversed(codes)]


def _conjugated_relator(rng: random.Random, relators, alphabet, max_g: int) -> list[int]:
    r = list(rng.choice(relators).codes)
    if rng.random() < 0.5:
        r = _inv(r)
    g = [rng.choice(alphabet) for _ in range(rng.randrange(0, max_g + 1))]
    return g + r + _inv(g)


def _balanced_codes(rng: random.Random, budget: int) -> list[int]:
    """A balanced word of roughly at most ``budget`` letters."""
    if budget < 2:
        return []
    roll = rng.random()
    if roll < 0.5 or budget < 4:
        out = []
        for _ in range(rng.randrange(1, max(2, budget // 2) + 1)):
            out.append(rng.choice((0, 2, 4, 6)))
            out.append(rng.choice((1, 3, 5, 7)))
        return out
    if roll < 0.75:
        e = rng.choice((8, 9))
        return [e] + _balanced_codes(rng, budget - 2) + [e ^ 1]
    half = budget // 2
    return _balanced_codes(rng, half) + _balanced_codes(rng, budget - half)


def _null_codes(rng: random.Random, budget: int, relators, alphabet, max_g: int) -> list[int]:
    """A null-homotopic word of roughly at most ``budget`` letters."""
    if budget < 4:
        return []
    roll = rng.random()
    if roll < 0.35:
        return _conjugated_relator(rng, relators, alphabet, min(max_g, budget // 2))
    if roll < 0.6:
        e = rng.choice((8, 9))
        return [e] + _null_codes(rng, budget - 2, relators, alphabet, max_g) + [e ^ 1]
    if roll < 0.85:
        beta = _balanced_codes(rng, max(2, budget // 2 - 1))
        e = rng.choice((8, 9))
        return [e] + beta + [e ^ 1] + _inv(beta)
    half = budget // 2
    return _null_codes(rng, half, relators, alphabet, max_g) + _null_codes(
        rng, budget - half, relators, alphabet, max_g
    )


def generate(profile: GenProfile, n: int) -> Word:
    """A freely reduced null-homotopic word of length in [n−8, n],
    deterministic in (profile, n)."""
    if n < 0 or n % 2:
        raise BadLength(f"target length must be even and nonnegative, got {n}")
    if n == 0:
        return EPSILON
    if profile.mode not in MODES:
        raise BadLength(f"unknown generator mode {profile.mode!r}")
    rng = random.Random(f"{profile.mode}|{n}|{profile.rng_seed}")
    commutators = PRESENTATION.relators[:4]
    if profile.mode == "commutator_heavy":
        relators, alphabet = commutators, _ABCD
    else:
        relators, alphabet = PRESENTATION.relators, _ALL
    lo = max(0, n - 8)
    max_g = profile.max_conjugator_length
    m = max(1, profile.num_factors)
    best = EPSILON
    for _ in range(5000):
        codes: list[int] = []
        for _ in range(m):
            if profile.mode == "nested_pinches":
                codes += _null_codes(rng, max(4, n // m), relators, alphabet, max_g)
            else:
                codes += _conjugated_relator(rng, relators, alphabet, max_g)
        w = Word._wrap(reduce_codes(codes))
        if lo <= len(w) <= n:
            return w
        if len(best) < len(w) <= n:
            best = w
        scaled = max(1, round(m * n / max(1, len(w))))
        if scaled == m:
            scaled = m + 1 if len(w) < lo else max(1, m - 1)
        m = scaled
    if len(best) > 0:
        return best
    raise StallingsError(f"could not generate a word of length near {n}")


def default_profile(mode: str, n: int, seed: int) -> GenProfile:
    max_g = max(2, n // 8)
    return GenProfile(
        mode=mode,
        num_factors=max(1, round(n / (max_g + 6))),
        max_conjugator_length=max_g,
        rng_seed=seed,
    )


# ---------------------------------------------------------------------------
# Bench
# ---------------------------------------------------------------------------


def bench(lengths, seeds_per_length: int, csv_path: str | None = None):
    """Generate, reduce, and verify each (n, seed) cell; returns
    (rows, fitted log-log slope)."""
    if not lengths:
        raise BadLength("no lengths given")
    rows: list[BenchRow] = []
    for n in lengths:
        for seed in range(seeds_per_length):
            mode = MODES[seed % len(MODES)]
            word = generate(default_profile(mode, n, seed), n)
            t0 = time.perf_counter()
            rep = reduce_report(word)
            check = verify_trace(rep.trace)
            ms = (time.perf_counter() - t0) * 1000.0
            if len(check.end) != 0 or check.cost != rep.cost:
                raise StallingsError("bench cell failed verification")
            actual_n = len(word)
            rows.append(
                BenchRow(actual_n, seed, check.cost, cost_bound(actual_n),
                         check.max_len, round(ms, 3))
            )
    slope = fit_slope(rows)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "seed", "cost", "bound", "max_len", "wall_time_ms"])
            for r in rows:
                writer.writerow([r.n, r.seed, r.cost, r.bound, r.max_len, r.wall_time_ms])
    return rows, slope


def fit_slope(rows) -> float:
    """Least-squares slope of log(mean cost) vs log(n) over the rows."""
    by_n: dict[int, list[int]] = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(max(1, r.cost))
    ns = sorted(by_n)
    if len(ns) < 2:
        return float("nan")
    xs = np.log([float(n) for n in ns])
    ys = np.log([float(np.mean(by_n[n])) for n in ns])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    word = generate(default_profile(args.mode, args.n, args.seed), args.n)
    print(word)
    return 0


def _cmd_reduce(args) -> int:
    with open(getattr(args, "in"), "r", encoding="ascii") as fh:
        word = parse_word(fh.read().strip())
    rep = reduce_report(word)
    write_trace(rep.trace, args.trace)
    print(f"n={rep.n} cost={rep.cost} bound={rep.bound} "
          f"max_boundary_len={rep.max_boundary_length} moves={len(rep.trace)}")
    return 0


def _cmd_verify(args) -> int:
    trace = read_trace(args.trace)
    report = verify_trace(trace)
    print(f"end={report.end if len(report.end) else '-'} cost={report.cost} "
          f"max_len={report.max_len} moves={len(trace)}")
    return 0


def _cmd_decide(args) -> int:
    word = parse_word(args.word)
    print("true" if decide_identity(word) else "false")
    return 0


def _cmd_bench(args) -> int:
    _config.set_cost_mode("sampled")
    lengths = [int(x) for x in args.lengths.split(",") if x]
    rows, slope = bench(lengths, args.seeds, args.csv)
    for r in rows:
        print(f"n={r.n} seed={r.seed} cost={r.cost} bound={r.bound} "
              f"ratio={r.cost / r.bound if r.bound else 0:.4f} "
              f"max_len={r.max_len} ms={r.wall_time_ms}")
    print(f"fitted log-log slope: {slope:.3f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stallings",
        description="Certified quadratic-cost word reduction in Stallings' group.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a null-homotopic word")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--n", type=int, required=True, help="even target length")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("reduce", help="reduce a word file to ε, writing a trace")
    p.add_argument("--in", required=True, help="file containing one ASCII word")
    p.add_argument("--trace", required=True, help="output trace file")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("verify", help="replay and check a trace file")
    p.add_argument("--trace", required=True)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("decide", help="decide whether a word represents 1")
    p.add_argument("--word", required=True)
    p.set_defaults(fn=_cmd_decide)

    p = sub.add_parser("bench", help="scaling sweep with CSV output")
    p.add_argument("--lengths", required=True, help="comma-separated lengths")
    p.add_argument("--seeds", type=int, required=True, help="seeds per length")
    p.add_argument("--csv", required=True, help="output CSV path")
    p.set_defaults(fn=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except StallingsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
