"""Trace replay engines: a numba gap-buffer kernel and a pure-Python twin.

Both implement identical semantics; the pure version is the readable
reference and the fallback when numba is unavailable (set STALLINGS_NO_JIT=1
to force it).  Large traces replay at tens of millions of moves per second
under the kernel, which is what makes whole-suite verification cheap.
"""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .rewriting import _PairTable

STATUS_REASONS = {
    0: "ok",
    1: "position out of range",
    2: "letters are not an inverse pair",
    3: "invalid letter code",
    4: "relator application out of range",
    5: "lhs does not occur at position",
    6: "pair id not in the rewrite-pair table",
}

_HAVE_NUMBA = False
if not os.environ.get("STALLINGS_NO_JIT"):
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        pass


def _replay_py(codes, kinds, poss, args, lhs, lhs_len, rhs, rhs_len):
    word = list(codes)
    cost = 0
    max_len = len(word)
    n_pairs = lhs_len.shape[0]
    for m in range(kinds.size):
        k = kinds[m]
        pos = int(poss[m])
        n = len(word)
        if k == 0:  # free reduce
            if not 0 <= pos <= n - 2:
                return 1, m, word, cost, max_len
            if word[pos] != word[pos + 1] ^ 1:
                return 2, m, word, cost, max_len
            del word[pos : pos + 2]
        elif k == 1:  # free expand
            a = int(args[m])
            if not 0 <= pos <= n or not 0 <= a <= 9:
                return 3 if not 0 <= a <= 9 else 1, m, word, cost, max_len
            word[pos:pos] = [a, a ^ 1]
        else:  # relator
            pid = int(args[m])
            if not 0 <= pid < n_pairs:
                return 6, m, word, cost, max_len
            ll = int(lhs_len[pid])
            if not 0 <= pos <= n - ll:
                return 4, m, word, cost, max_len
            for i in range(ll):
                if word[pos + i] != lhs[pid, i]:
                    return 5, m, word, cost, max_len
            word[pos : pos + ll] = [int(rhs[pid, i]) for i in range(int(rhs_len[pid]))]
            cost += 1
        if len(word) > max_len:
            max_len = len(word)
    return 0, -1, word, cost, max_len


if _HAVE_NUMBA:

    @njit(cache=True)
    def _replay_nb(buf, gl, gr, kinds, poss, args, lhs, lhs_len, rhs, rhs_len):
        # logical word = buf[0:gl] + buf[gr:cap]; gap buffer with moving cursor
        cap = buf.size
        cost = 0
        max_len = gl + (cap - gr)
        n_pairs = lhs_len.shape[0]
        for m in range(kinds.size):
            k = kinds[m]
            pos = poss[m]
            n = gl + (cap - gr)
            if pos < 0:
                return 1, m, gl, gr, cost, max_len
            # move the gap so that logical index pos sits at buf[gr]
            while gl < pos:
                if gr >= cap:
                    return 1, m, gl, gr, cost, max_len
                buf[gl] = buf[gr]
                gl += 1
                gr += 1
            while gl > pos:
                gl -= 1
                gr -= 1
                buf[gr] = buf[gl]
            if k == 0:  # free reduce
                if n - pos < 2:
                    return 1, m, gl, gr, cost, max_len
                if buf[gr] != (buf[gr + 1] ^ 1):
                    return 2, m, gl, gr, cost, max_len
                gr += 2
            elif k == 1:  # free expand
                a = args[m]
                if a < 0 or a > 9:
                    return 3, m, gl, gr, cost, max_len
                if pos > n:
                    return 1, m, gl, gr, cost, max_len
                buf[gl] = np.int8(a)
                gl += 1
                buf[gl] = np.int8(a ^ 1)
                gl += 1
            else:  # relator
                pid = args[m]
                if pid < 0 or pid >= n_pairs:
                    return 6, m, gl, gr, cost, max_len
                ll = lhs_len[pid]
                if pos > n - ll:
                    return 4, m, gl, gr, cost, max_len
                for i in range(ll):
                    if buf[gr + i] != lhs[pid, i]:
                        return 5, m, gl, gr, cost, max_len
                gr += ll
                for i in range(rhs_len[pid]):
                    buf[gl] = rhs[pid, i]
                    gl += 1
                cost += 1
            n = gl + (cap - gr)
            if n > max_len:
                max_len = n
        return 0, -1, gl, gr, cost, max_len


def _capacity(start_len: int, kinds) -> int:
    """A cheap upper bound on the peak replayed length (bytes are cheap)."""
    n_e = int(np.count_nonzero(kinds == 1))
    n_r = int(np.count_nonzero(kinds == 2))
    return start_len + 2 * n_e + 4 * n_r


def replay(start_codes, kinds, poss, args, table: "_PairTable", use_jit=None):
    """Replay; returns (status, fail_index, end_codes, cost, max_len)."""
    if use_jit is None:
        use_jit = _HAVE_NUMBA
    if use_jit and not _HAVE_NUMBA:
        raise RuntimeError("numba unavailable; cannot force jit replay")
    if not use_jit:
        status, idx, word, cost, max_len = _replay_py(
            start_codes, kinds, poss, args,
            table.lhs, table.lhs_len, table.rhs, table.rhs_len,
        )
        return status, idx, word, cost, max_len
    cap = _capacity(len(start_codes), kinds) + 8
    buf = np.empty(cap, dtype=np.int8)
    n0 = len(start_codes)
    buf[cap - n0 :] = np.frombuffer(bytes(start_codes), dtype=np.int8) if n0 else 0
    status, idx, gl, gr, cost, max_len = _replay_nb(
        buf, 0, cap - n0,
        np.ascontiguousarray(kinds),
        np.ascontiguousarray(poss),
        np.ascontiguousarray(args),
        table.lhs, table.lhs_len, table.rhs, table.rhs_len,
    )
    end = np.concatenate([buf[:gl], buf[gr:]])
    return status, idx, end.tolist(), cost, max_len
