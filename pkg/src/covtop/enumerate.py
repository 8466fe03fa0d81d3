"""Covering enumeration, the inclusion-exclusion counting oracle, and sampling."""

from __future__ import annotations

from math import comb
from typing import Iterator

from .config import BudgetExceeded, current_budget
from .covering import Covering
from .rng import SplitMix64
from .sets import SetFamily, Universe, make_universe


def default_universe(n: int) -> Universe:
    return make_universe([str(i + 1) for i in range(n)])


def enumerate_coverings(n: int, universe: Universe | None = None) -> Iterator[Covering]:
    """Every covering of an ``n``-element universe, exactly once.

    Coverings come out ordered lexicographically by their sorted mask lists
    (a prefix sorts before its extensions).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = current_budget().enumerate
    if n > limit:
        raise BudgetExceeded(
            f"exhaustive enumeration is limited to n <= {limit}; use sampled mode"
        )
    u = universe or default_universe(n)
    full = u.full
    chosen: list[int] = []

    def walk(start: int, covered: int) -> Iterator[Covering]:
        for m in range(start, full + 1):
            chosen.append(m)
            now = covered | m
            if now == full:
                yield Covering(u, SetFamily(u, tuple(chosen)))
            yield from walk(m + 1, now)
            chosen.pop()

    yield from walk(1, 0)


def count_coverings(n: int) -> int:
    """Sum over k of (-1)^k C(n, k) 2^(2^(n-k) - 1)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return sum((-1) ** k * comb(n, k) * 2 ** (2 ** (n - k) - 1) for k in range(n + 1))


def sample_coverings(
    n: int, count: int, seed: int, universe: Universe | None = None
) -> Iterator[Covering]:
    """``count`` coverings drawn with replacement.

    Each draw takes ``2^n - 1`` generator bits, bit ``m - 1`` selecting the
    nonempty subset with mask ``m``, and is rejected unless the selected
    blocks cover the universe.
    """
    u = universe or default_universe(n)
    full = u.full
    rng = SplitMix64(seed)
    width = full
    produced = 0
    while produced < count:
        pick = rng.bits(width)
        blocks = []
        covered = 0
        m = 1
        while pick:
            if pick & 1:
                blocks.append(m)
                covered |= m
            pick >>= 1
            m += 1
        if covered != full:
            continue
        produced += 1
        yield Covering(u, SetFamily(u, tuple(blocks)))
