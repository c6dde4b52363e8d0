"""Runtime switches for per-call cost assertions and structural checks.

Cost assertions compare a subroutine's measured relator count against the
bound its contract guarantees.  They are cheap and enabled everywhere by
default; benchmark runs sample them (1 in 64 calls per site) so the hot
path is not distorted.  ``debug_checks`` guards the expensive structural
re-derivations (recomputing target forms from scratch) used by the tests.
"""

from __future__ import annotations

from collections import defaultdict

from .errors import CostBoundExceeded

#: "all" | "sampled" | "off"
cost_mode: str = "all"

#: expensive end-word / shape re-derivation checks
debug_checks: bool = False

SAMPLE_RATE = 64

_counters: dict[str, int] = defaultdict(int)


def set_cost_mode(mode: str) -> None:
    global cost_mode
    if mode not in ("all", "sampled", "off"):
        raise ValueError(f"unknown cost mode {mode!r}")
    cost_mode = mode


def set_debug_checks(on: bool) -> None:
    global debug_checks
    debug_checks = on


def check_cost(site: str, cost: int, bound: int) -> None:
    """Assert ``cost <= bound`` for this call site, honouring the mode."""
    if cost_mode == "off":
        return
    if cost_mode == "sampled":
        _counters[site] += 1
        if _counters[site] % SAMPLE_RATE != 1:
            return
    if cost > bound:
        raise CostBoundExceeded(f"{site}: cost {cost} exceeds bound {bound}")
