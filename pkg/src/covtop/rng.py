"""SplitMix64, the seeded generator behind every sampled sweep.

The sequence is fixed by its recurrence so any implementation can
reproduce a sampled run from the seed alone::

    state <- (state + 0x9E3779B97F4A7C15) mod 2**64
    z <- state
    z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z <- (z xor (z >> 27)) * 0x94D049BB133111EB mod 2**64
    output z xor (z >> 31)

``bits(k)`` concatenates whole 64-bit outputs, least significant word
first, and keeps the low ``k`` bits.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def bits(self, k: int) -> int:
        out = 0
        for word in range((k + 63) // 64):
            out |= self.next() << (64 * word)
        return out & ((1 << k) - 1)
