"""Finite universes, subsets as bit masks, and canonical set families.

Element ``i`` of a universe is bit ``i`` of a mask, so a subset of an
``n``-element universe is an integer in ``[0, 2**n)``.  Families are kept
duplicate free and sorted by that integer value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .config import current_budget


class ValidationError(ValueError):
    """Bad input: unknown labels, mismatched universes, invalid coverings."""


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``bits`` in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Universe:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValidationError("universe must have at least one element")
        seen = set()
        for label in self.labels:
            if not isinstance(label, str) or not label:
                raise ValidationError(f"invalid label {label!r}")
            if label in seen:
                raise ValidationError(f"duplicate label {label!r}")
            seen.add(label)
        limit = current_budget().max_n
        if len(self.labels) > limit:
            raise ValidationError(
                f"universe has {len(self.labels)} elements; the maximum is {limit}"
            )

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown label {label!r}") from None

    def mask(self, bits: int) -> "SubsetMask":
        return SubsetMask(bits, self)

    @property
    def empty(self) -> "SubsetMask":
        return SubsetMask(0, self)

    @property
    def everything(self) -> "SubsetMask":
        return SubsetMask(self.full, self)

    def subsets(self) -> Iterator["SubsetMask"]:
        for bits in range(1 << self.n):
            yield SubsetMask(bits, self)

    def render(self, bits: int) -> str:
        """Human rendering: labels in universe order inside braces, ``∅`` if empty."""
        if not bits:
            return "∅"
        return "{" + ",".join(self.labels[i] for i in iter_bits(bits)) + "}"

    def names(self, bits: int) -> list[str]:
        return [self.labels[i] for i in iter_bits(bits)]


def make_universe(labels: Sequence[str]) -> Universe:
    return Universe(tuple(labels))


@dataclass(frozen=True)
class SubsetMask:
    bits: int
    universe: Universe

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits > self.universe.full:
            raise ValidationError(f"mask {self.bits:#x} does not fit a universe of size {self.universe.n}")

    def _same(self, other: "SubsetMask") -> None:
        if not isinstance(other, SubsetMask):
            raise TypeError(f"expected SubsetMask, got {type(other).__name__}")
        if other.universe != self.universe:
            raise ValidationError("operands belong to different universes")

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        self._same(other)
        return SubsetMask(self.bits | other.bits, self.universe)

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        self._same(other)
        return SubsetMask(self.bits & other.bits, self.universe)

    def __sub__(self, other: "SubsetMask") -> "SubsetMask":
        self._same(other)
        return SubsetMask(self.bits & ~other.bits, self.universe)

    def __invert__(self) -> "SubsetMask":
        return SubsetMask(self.universe.full & ~self.bits, self.universe)

    def __le__(self, other: "SubsetMask") -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "SubsetMask") -> bool:
        return self <= other and self.bits != other.bits

    def __contains__(self, index: int) -> bool:
        return bool(self.bits >> index & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def labels(self) -> list[str]:
        return self.universe.names(self.bits)

    def __str__(self) -> str:
        return self.universe.render(self.bits)


def subset_from_labels(u: Universe, names: Iterable[str]) -> SubsetMask:
    bits = 0
    for name in names:
        bits |= 1 << u.index(name)
    return SubsetMask(bits, u)


def set_algebra(op: str, x: SubsetMask, y: SubsetMask | None = None):
    """Evaluate one Boolean set operation.

    ``op`` is one of ``complement``, ``union``, ``intersection``,
    ``difference`` or ``is_subset``; all but ``complement`` need ``y``.
    """
    if op == "complement":
        return ~x
    if y is None:
        raise ValidationError(f"{op} needs two operands")
    if op == "union":
        return x | y
    if op == "intersection":
        return x & y
    if op == "difference":
        return x - y
    if op == "is_subset":
        return x <= y
    raise ValidationError(f"unknown set operation {op!r}")


@dataclass(frozen=True)
class SetFamily:
    universe: Universe
    bits: tuple[int, ...]

    @classmethod
    def of(cls, u: Universe, members: Iterable[int | SubsetMask]) -> "SetFamily":
        raw = set()
        for m in members:
            if isinstance(m, SubsetMask):
                if m.universe != u:
                    raise ValidationError("family member from a different universe")
                m = m.bits
            if m < 0 or m > u.full:
                raise ValidationError(f"mask {m:#x} does not fit the universe")
            raw.add(m)
        return cls(u, tuple(sorted(raw)))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[SubsetMask]:
        return (SubsetMask(b, self.universe) for b in self.bits)

    def __contains__(self, item: SubsetMask | int) -> bool:
        bits = item.bits if isinstance(item, SubsetMask) else item
        return bits in self._lookup

    @property
    def _lookup(self) -> frozenset[int]:
        cached = self.__dict__.get("_lookup_set")
        if cached is None:
            cached = frozenset(self.bits)
            object.__setattr__(self, "_lookup_set", cached)
        return cached

    def union(self) -> int:
        out = 0
        for b in self.bits:
            out |= b
        return out

    def render(self) -> str:
        return "{" + ", ".join(self.universe.render(b) for b in self.bits) + "}"

    def names(self) -> list[list[str]]:
        return [self.universe.names(b) for b in self.bits]


def blocks_partition(bits: Iterable[int], full: int) -> bool:
    """True iff the masks are nonempty, pairwise disjoint and cover ``full``."""
    seen = 0
    for b in bits:
        if not b or seen & b:
            return False
        seen |= b
    return seen == full


def is_partition(f: SetFamily, u: Universe) -> bool:
    if f.universe != u:
        raise ValidationError("family and universe differ")
    return blocks_partition(f.bits, u.full)
