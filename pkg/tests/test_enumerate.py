from itertools import combinations

import pytest

from covtop.config import BudgetExceeded
from covtop.enumerate import count_coverings, enumerate_coverings, sample_coverings


def brute_count(n):
    """Count coverings by filtering every family of nonempty subsets."""
    full = (1 << n) - 1
    subsets = range(1, full + 1)
    total = 0
    for k in range(1, full + 1):
        for fam in combinations(subsets, k):
            acc = 0
            for b in fam:
                acc |= b
            total += acc == full
    return total


@pytest.mark.parametrize("n", [1, 2, 3])
def test_oracle_matches_brute_force(n):
    assert count_coverings(n) == brute_count(n)


def test_oracle_values():
    assert [count_coverings(n) for n in range(1, 5)] == [1, 5, 109, 32297]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_is_complete_and_unique(n):
    seen = [c.masks for c in enumerate_coverings(n)]
    assert len(seen) == len(set(seen)) == count_coverings(n)
    assert seen == sorted(seen)


def test_enumeration_budget(monkeypatch):
    monkeypatch.setenv("COVTOP_BUDGET", "enumerate=2")
    with pytest.raises(BudgetExceeded):
        next(enumerate_coverings(3))
    with pytest.raises(ValueError):
        next(enumerate_coverings(0))


def test_sampling_is_seeded_and_valid():
    a = [c.masks for c in sample_coverings(5, 40, seed=11)]
    b = [c.masks for c in sample_coverings(5, 40, seed=11)]
    assert a == b and len(a) == 40
    assert a != [c.masks for c in sample_coverings(5, 40, seed=12)]
    for masks in a:
        acc = 0
        for m in masks:
            acc |= m
        assert acc == 31


def test_sampling_reaches_every_small_covering():
    got = {c.masks for c in sample_coverings(2, 400, seed=1)}
    assert got == {c.masks for c in enumerate_coverings(2)}
