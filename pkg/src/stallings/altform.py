"""Alternating and balanced words; partitioned and dyadic alternating forms.

An *alternating* word is an even-length word on a..d whose odd positions
(1-based) are positive letters and even positions negative ones.  A word on
all five generators is *balanced* when it equals some alternating word in
the group, equivalently when it has exponent sum zero and represents an
element of <a,b,c,d>.

The partitioned alternating form (PAF) of a balanced s-free word v with
partition v₁…v_k substitutes each piece:

    λᵢ = vᵢ with c,d letters deleted        ρᵢ: a→ac⁻¹  b→bc⁻¹  a⁻¹→ca⁻¹  b⁻¹→cb⁻¹
    μᵢ = vᵢ with a,b letters deleted        σᵢ: c→ca⁻¹  d→da⁻¹  c⁻¹→ac⁻¹  d⁻¹→ad⁻¹

and joins the pieces with connector powers whose exponents are the running
sums ξ(λ₁μ₁…λᵢ) after ρᵢ and ξ(λ₁μ₁…λᵢμᵢ) after σᵢ:

    ρ₁ (ca⁻¹)^{ξ(λ₁)} σ₁ (ac⁻¹)^{ξ(λ₁μ₁)} … ρ_k (ca⁻¹)^{ξ(λ₁…λ_k)} σ_k.

The dyadic alternating form (DAF) of a balanced subword v of a host word w
is the PAF of v with the s letters stripped, partitioned along the minimal
dyadic cover of its letter positions inside the stripped host; its length
is at most 10·ℓ(v).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _config
from .britton import pinch_strip
from .dyadic import DyadicInterval, Interval, mdc
from .errors import BadPartition, NotBalanced, PositionMismatch, ShapeMismatch
from .fxf import emit_shuffle_to
from .rewriting import Trace, TraceBuilder
from .words import S, Word, exponent_sum, strip_s

__all__ = [
    "AltShape",
    "ShapePiece",
    "DafDescriptor",
    "is_alternating",
    "is_balanced",
    "paf",
    "paf_shape",
    "paf_trace",
    "daf",
]

# substitution tables, by letter code
_RHO_SUB = {0: (0, 5), 2: (2, 5), 1: (4, 1), 3: (4, 3)}
_SIGMA_SUB = {4: (4, 1), 6: (6, 1), 5: (0, 5), 7: (0, 7)}

_CA_FACTOR = (4, 1)  # c·a⁻¹
_AC_FACTOR = (0, 5)  # a·c⁻¹


def block_codes(kind: str, m: int) -> tuple[int, ...]:
    """The letters of (ca⁻¹)^m or (ac⁻¹)^m; negative powers flip the factor."""
    pos, neg = (_CA_FACTOR, _AC_FACTOR) if kind == "ca" else (_AC_FACTOR, _CA_FACTOR)
    return (pos if m >= 0 else neg) * abs(m)


def is_alternating(u: Word) -> bool:
    """Even length; positive a..d letters at odd 1-based positions, negative
    a..d letters at even positions."""
    codes = u.codes
    if len(codes) % 2:
        return False
    for i, c in enumerate(codes):
        if c >= S or (c & 1) != (i & 1):
            return False
    return True


def is_balanced(u: Word) -> bool:
    """True iff u has exponent sum zero and pinch-reduces to an s-free word."""
    return exponent_sum(u) == 0 and pinch_strip(u) is not None


# ---------------------------------------------------------------------------
# Shapes
# ---------------------------------------------------------------------------


def _project(codes: tuple[int, ...], ab: bool) -> tuple[int, ...]:
    return tuple(c for c in codes if (c < 4) == ab)


@dataclass(frozen=True)
class ShapePiece:
    """One piece ρᵢ (ca⁻¹)^{αᵢ} σᵢ (ac⁻¹)^{βᵢ} with its source subword vᵢ."""

    source: tuple[int, ...]
    lam: tuple[int, ...]
    mu: tuple[int, ...]
    rho: tuple[int, ...]
    sigma: tuple[int, ...]
    alpha: int
    beta: int

    @property
    def flat_len(self) -> int:
        return len(self.rho) + 2 * abs(self.alpha) + len(self.sigma) + 2 * abs(self.beta)

    def flat_codes(self) -> tuple[int, ...]:
        return (
            self.rho
            + block_codes("ca", self.alpha)
            + self.sigma
            + block_codes("ac", self.beta)
        )

    def segment_offsets(self) -> tuple[int, int, int, int, int]:
        """(rho, ca-block, sigma, ac-block, end) starts relative to the piece."""
        r = len(self.rho)
        ca = r + 2 * abs(self.alpha)
        sg = ca + len(self.sigma)
        return (0, r, ca, sg, sg + 2 * abs(self.beta))

    def with_exponents(self, alpha: int, beta: int) -> "ShapePiece":
        return ShapePiece(self.source, self.lam, self.mu, self.rho, self.sigma, alpha, beta)


def make_piece(source: Sequence[int], alpha: int, beta: int) -> ShapePiece:
    source = tuple(source)
    lam = _project(source, ab=True)
    mu = _project(source, ab=False)
    rho = tuple(x for c in lam for x in _RHO_SUB[c])
    sigma = tuple(x for c in mu for x in _SIGMA_SUB[c])
    return ShapePiece(source, lam, mu, rho, sigma, alpha, beta)


def _xi(codes) -> int:
    return sum(1 if (c & 1) == 0 else -1 for c in codes)


class AltShape:
    """A word in partitioned alternating form, kept as structured pieces.

    The flattened word and the piece structure are maintained together by
    construction; flattened words are never re-parsed into pieces.
    """

    __slots__ = ("pieces", "last_beta_omitted", "_flat", "_offsets")

    def __init__(self, pieces: Sequence[ShapePiece], last_beta_omitted: bool = True):
        self.pieces: tuple[ShapePiece, ...] = tuple(pieces)
        self.last_beta_omitted = last_beta_omitted
        if last_beta_omitted and self.pieces and self.pieces[-1].beta != 0:
            raise ShapeMismatch("omitted trailing power must be zero")
        self._flat: Word | None = None
        self._offsets: tuple[int, ...] | None = None

    @property
    def k(self) -> int:
        return len(self.pieces)

    @property
    def flat_len(self) -> int:
        return sum(p.flat_len for p in self.pieces)

    def flatten(self) -> Word:
        if self._flat is None:
            codes: list[int] = []
            for p in self.pieces:
                codes.extend(p.flat_codes())
            self._flat = Word._wrap(tuple(codes))
        return self._flat

    def piece_offsets(self) -> tuple[int, ...]:
        """Start offset of each piece in the flattened word, plus the total."""
        if self._offsets is None:
            offs = [0]
            for p in self.pieces:
                offs.append(offs[-1] + p.flat_len)
            self._offsets = tuple(offs)
        return self._offsets

    def source_word(self) -> Word:
        return Word._wrap(tuple(c for p in self.pieces for c in p.source))

    def xi_prefix(self, i: int) -> int:
        """ξ(v₁ … vᵢ₋₁) over the source pieces."""
        return sum(_xi(p.source) for p in self.pieces[:i])

    def is_canonical(self) -> bool:
        """Exponents equal the running sums of the underlying partition."""
        running = 0
        for p in self.pieces:
            if p.alpha != running + _xi(p.lam):
                return False
            if p.beta != p.alpha + _xi(p.mu):
                return False
            running = p.beta
        return True

    def __repr__(self) -> str:
        return f"AltShape(k={self.k}, len={self.flat_len})"


@dataclass(frozen=True)
class DafDescriptor:
    """Where a dyadic alternating form lives in its host word."""

    host_positions: Interval | None  # positions of the stripped subword, or None
    partition: tuple[DyadicInterval, ...]
    shape: AltShape


# ---------------------------------------------------------------------------
# PAF / DAF
# ---------------------------------------------------------------------------


def _check_paf_input(v: Word, piece_lengths: Sequence[int]) -> None:
    if not v.is_s_free():
        raise NotBalanced(f"word contains s letters: {v}")
    if exponent_sum(v) != 0:
        raise NotBalanced(f"exponent sum {exponent_sum(v)} != 0: {v}")
    if any(n < 0 for n in piece_lengths) or sum(piece_lengths) != len(v):
        raise BadPartition(
            f"piece lengths {list(piece_lengths)} do not partition a word of length {len(v)}"
        )


def paf_shape(v: Word, piece_lengths: Sequence[int]) -> AltShape:
    """The PAF of a balanced s-free word with respect to a partition."""
    _check_paf_input(v, piece_lengths)
    pieces: list[ShapePiece] = []
    running = 0
    at = 0
    for n in piece_lengths:
        src = v.codes[at : at + n]
        at += n
        lam = _project(src, ab=True)
        mu = _project(src, ab=False)
        alpha = running + _xi(lam)
        beta = alpha + _xi(mu)
        running = beta
        pieces.append(make_piece(src, alpha, beta))
    return AltShape(pieces, last_beta_omitted=True)


def paf(v: Word, piece_lengths: Sequence[int]) -> Word:
    """Flattened partitioned alternating form; alternating, and equal to v
    in F(a,b) x F(c,d)."""
    return paf_shape(v, piece_lengths).flatten()


def paf_trace(v: Word, piece_lengths: Sequence[int]) -> Trace:
    """A trace from v to paf(v, partition), transforming the pieces left to
    right: each step rewrites the window c^m · vᵢ into
    ρᵢ (ca⁻¹)^{αᵢ} σᵢ (ac⁻¹)^{βᵢ} · c^{βᵢ} by commutator relators."""
    shape = paf_shape(v, piece_lengths)
    tb = TraceBuilder()
    off = 0
    m = 0
    at = 0
    for p in shape.pieces:
        src = v.codes[at : at + len(p.source)]
        at += len(p.source)
        window = ((4,) * m if m >= 0 else (5,) * (-m)) + src
        target = p.flat_codes() + ((4,) * p.beta if p.beta >= 0 else (5,) * (-p.beta))
        emit_shuffle_to(tb, off, window, target)
        off += p.flat_len
        m = p.beta
    return tb.build(v)


def daf(v: Word, w: Word, at: int) -> tuple[Word, DafDescriptor]:
    """Dyadic alternating form of the balanced subword v = w[at : at+ℓ(v)].

    The partition is the minimal dyadic cover of the positions of v's
    non-s letters within the s-stripped host; the result's length is at
    most 10·ℓ(v).
    """
    if not (0 <= at and at + len(v) <= len(w)) or w.codes[at : at + len(v)] != v.codes:
        raise PositionMismatch(f"subword does not occur at position {at}")
    if not is_balanced(v):
        raise NotBalanced(f"subword is not balanced: {v}")
    v_hat = strip_s(v)
    hat_start = sum(1 for c in w.codes[:at] if c < S)
    if len(v_hat) == 0:
        shape = AltShape(())
        return shape.flatten(), DafDescriptor(None, (), shape)
    interval = (hat_start, hat_start + len(v_hat) - 1)
    partition = mdc(interval)
    shape = paf_shape(v_hat, [d.size for d in partition])
    word = shape.flatten()
    if _config.debug_checks and len(word) > 10 * len(v):
        raise ShapeMismatch(f"dyadic form length {len(word)} exceeds 10·{len(v)}")
    return word, DafDescriptor(interval, tuple(partition), shape)
