"""Deterministic 64-bit generator for reproducible corpora.

SplitMix64: the state advances by the additive constant 0x9E3779B97F4A7C15
and each output is finalized with the xor-shift-multiply constants
0xBF58476D1CE4E5B9 and 0x94D049BB133111EB (shifts 30/27/31).  Fixed here so
corpora reproduce across implementations and platforms.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("need a positive bound")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def int_range(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def fraction(self, max_abs_num: int = 3, max_den: int = 3) -> Fraction:
        return Fraction(self.int_range(-max_abs_num, max_abs_num),
                        self.int_range(1, max_den))
