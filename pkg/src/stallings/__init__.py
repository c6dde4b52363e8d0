"""Certified word reduction in Stallings' group.

A library and CLI that reduce null-homotopic words over the presentation
< a,b,c,d,s | [a,c],[a,d],[b,c],[b,d], s^a=s^b=s^c=s^d > to the empty word,
emitting machine-checkable traces of elementary moves whose relator count
is certified against a quadratic bound.
"""

from .words import EPSILON, Letter, Word, exponent_sum, free_reduce, parse_word, strip_s
from .rewriting import (
    Move,
    PRESENTATION,
    Trace,
    apply_move,
    read_trace,
    rewrite_pairs,
    verify_trace,
    write_trace,
)

__all__ = [
    "EPSILON",
    "Letter",
    "Word",
    "exponent_sum",
    "free_reduce",
    "parse_word",
    "strip_s",
    "Move",
    "PRESENTATION",
    "Trace",
    "apply_move",
    "read_trace",
    "rewrite_pairs",
    "verify_trace",
    "write_trace",
]

__version__ = "0.1.0"
