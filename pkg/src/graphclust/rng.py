"""Deterministic seed derivation.

Randomized steps never share one global stream: each consumer derives its
own 64-bit seed from the user seed plus integer tags, so the draw a vertex
sees in superstep t does not depend on how many other vertices drew before
it. That is what makes runs bit-identical regardless of worker count.
"""

from __future__ import annotations

import random

_MASK = 0xFFFFFFFFFFFFFFFF
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(*parts: int) -> int:
    """Fold integers into one well-scrambled 64-bit value (splitmix64 finalizer)."""
    x = 0
    for p in parts:
        x = (x ^ (p & _MASK) ^ ((x << 7) & _MASK)) & _MASK
        x = (x + _GOLDEN) & _MASK
        x = ((x ^ (x >> 30)) * _MUL1) & _MASK
        x = ((x ^ (x >> 27)) * _MUL2) & _MASK
        x = x ^ (x >> 31)
    return x


def derived_rng(*parts: int) -> random.Random:
    """A fresh Random seeded from the mixed parts."""
    return random.Random(mix64(*parts))
