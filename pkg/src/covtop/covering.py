"""Coverings, neighborhood tables and covering approximation operators.

Seven operators are built from a covering ``C`` of ``U``::

    CL(X) = union of blocks K with K <= X
    SL(X) = {x in X : I(x) <= X}
    XL(X) = {x : N(x) <= X}
    FH(X) = CL(X) | union of (union Md(x)) for x in X - CL(X)
    SH(X) = union of blocks meeting X
    IH(X) = union of N(x) for x in X
    XH(X) = {x : N(x) meets X}

where ``Md(x)`` are the inclusion-minimal blocks containing ``x``,
``I(x)`` their union over all blocks containing ``x`` and ``N(x)`` the
intersection of those blocks.  The Pawlak pair is available when the
covering is a partition.

Everything internal works on integer masks; the public functions accept
and return :class:`~covtop.sets.SubsetMask`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import Budget, BudgetExceeded, current_budget
from .rng import SplitMix64
from .sets import (
    SetFamily,
    SubsetMask,
    Universe,
    ValidationError,
    blocks_partition,
    iter_bits,
)


class Op(enum.Enum):
    CL = "CL"
    SL = "SL"
    XL = "XL"
    FH = "FH"
    SH = "SH"
    IH = "IH"
    XH = "XH"
    PAWLAK_LOWER = "PAWLAK_LOWER"
    PAWLAK_UPPER = "PAWLAK_UPPER"

    @property
    def lower(self) -> bool:
        return self in _LOWER

    @property
    def polarity(self) -> str:
        return "lower" if self.lower else "upper"

    @classmethod
    def parse(cls, name: str) -> "Op":
        try:
            return cls(name.upper())
        except ValueError:
            raise ValidationError(
                f"unknown operator {name!r}; expected one of {[o.value for o in cls]}"
            ) from None


_LOWER = frozenset({Op.CL, Op.SL, Op.XL, Op.PAWLAK_LOWER})
COVERING_OPS = (Op.CL, Op.SL, Op.XL, Op.FH, Op.SH, Op.IH, Op.XH)
LOWER_OPS = (Op.CL, Op.SL, Op.XL)
UPPER_OPS = (Op.FH, Op.SH, Op.IH, Op.XH)

# Partner used for the complement property (6LH).  IH has no lower dual of
# its own; it is paired with CL, the operator it is built from.
DUAL_PAIRS = {
    Op.CL: (Op.CL, Op.FH),
    Op.FH: (Op.CL, Op.FH),
    Op.SL: (Op.SL, Op.SH),
    Op.SH: (Op.SL, Op.SH),
    Op.XL: (Op.XL, Op.XH),
    Op.XH: (Op.XL, Op.XH),
    Op.IH: (Op.CL, Op.IH),
    Op.PAWLAK_LOWER: (Op.PAWLAK_LOWER, Op.PAWLAK_UPPER),
    Op.PAWLAK_UPPER: (Op.PAWLAK_LOWER, Op.PAWLAK_UPPER),
}


@dataclass(frozen=True)
class Covering:
    universe: Universe
    blocks: SetFamily
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def n(self) -> int:
        return self.universe.n

    @property
    def masks(self) -> tuple[int, ...]:
        return self.blocks.bits

    def cached(self, key, compute: Callable[[], object]):
        """Write-once memo slot; concurrent fills compute the same value."""
        try:
            return self._cache[key]
        except KeyError:
            value = compute()
            return self._cache.setdefault(key, value)

    # Neighborhood tables, one entry per element index.

    @property
    def containing(self) -> tuple[tuple[int, ...], ...]:
        def build():
            return tuple(
                tuple(b for b in self.masks if b >> x & 1) for x in range(self.n)
            )

        return self.cached("containing", build)

    @property
    def md_table(self) -> tuple[tuple[int, ...], ...]:
        def build():
            out = []
            for blocks in self.containing:
                # blocks are distinct, so S <= K with S != K is a proper subset
                out.append(
                    tuple(
                        k for k in blocks
                        if not any(s != k and s & ~k == 0 for s in blocks)
                    )
                )
            return tuple(out)

        return self.cached("md", build)

    @property
    def md_union(self) -> tuple[int, ...]:
        def build():
            out = []
            for blocks in self.md_table:
                acc = 0
                for b in blocks:
                    acc |= b
                out.append(acc)
            return tuple(out)

        return self.cached("md_union", build)

    @property
    def n_table(self) -> tuple[int, ...]:
        def build():
            out = []
            for blocks in self.containing:
                acc = self.universe.full
                for b in blocks:
                    acc &= b
                out.append(acc)
            return tuple(out)

        return self.cached("n", build)

    @property
    def i_table(self) -> tuple[int, ...]:
        def build():
            out = []
            for blocks in self.containing:
                acc = 0
                for b in blocks:
                    acc |= b
                out.append(acc)
            return tuple(out)

        return self.cached("i", build)

    @property
    def is_partition(self) -> bool:
        return self.cached("partition", lambda: blocks_partition(self.masks, self.universe.full))

    def fingerprint(self) -> str:
        from .io import covering_fingerprint

        return self.cached("fingerprint", lambda: covering_fingerprint(self))

    def render(self) -> str:
        return self.blocks.render()


def make_covering(u: Universe, blocks: Iterable[SubsetMask | int]) -> Covering:
    """Validate, deduplicate and canonically order a covering of ``u``."""
    family = SetFamily.of(u, blocks)
    if 0 in family.bits:
        raise ValidationError("coverings may not contain the empty set")
    missing = u.full & ~family.union()
    if missing:
        raise ValidationError(f"blocks do not cover the universe; uncovered: {u.render(missing)}")
    return Covering(u, family)


def _check_index(c: Covering, x: int) -> None:
    if not 0 <= x < c.n:
        raise ValidationError(f"element index {x} out of range for a universe of size {c.n}")


def minimal_description(c: Covering, x: int) -> SetFamily:
    _check_index(c, x)
    return SetFamily(c.universe, c.md_table[x])


def indiscernible_neighborhood(c: Covering, x: int) -> SubsetMask:
    _check_index(c, x)
    return SubsetMask(c.i_table[x], c.universe)


def neighborhood(c: Covering, x: int) -> SubsetMask:
    _check_index(c, x)
    return SubsetMask(c.n_table[x], c.universe)


def n_family(c: Covering) -> SetFamily:
    return SetFamily(c.universe, tuple(sorted(set(c.n_table))))


def i_family(c: Covering) -> SetFamily:
    return SetFamily(c.universe, tuple(sorted(set(c.i_table))))


def is_unary(c: Covering) -> bool:
    return all(len(md) == 1 for md in c.md_table)


# Operator evaluation on raw masks.

def _cl(c: Covering, x: int) -> int:
    out = 0
    for b in c.masks:
        if b & ~x == 0:
            out |= b
    return out


def _sl(c: Covering, x: int) -> int:
    out = 0
    ind = c.i_table
    for i in iter_bits(x):
        if ind[i] & ~x == 0:
            out |= 1 << i
    return out


def _xl(c: Covering, x: int) -> int:
    out = 0
    for i, nb in enumerate(c.n_table):
        if nb & ~x == 0:
            out |= 1 << i
    return out


def _fh(c: Covering, x: int) -> int:
    low = _cl(c, x)
    out = low
    md = c.md_union
    for i in iter_bits(x & ~low):
        out |= md[i]
    return out


def _sh(c: Covering, x: int) -> int:
    out = 0
    for b in c.masks:
        if b & x:
            out |= b
    return out


def _ih(c: Covering, x: int) -> int:
    out = 0
    nb = c.n_table
    for i in iter_bits(x):
        out |= nb[i]
    return out


def _xh(c: Covering, x: int) -> int:
    out = 0
    for i, nb in enumerate(c.n_table):
        if nb & x:
            out |= 1 << i
    return out


def _pawlak_lower(c: Covering, x: int) -> int:
    out = 0
    for i, cls in enumerate(_pawlak_table(c)):
        if cls & ~x == 0:
            out |= 1 << i
    return out


def _pawlak_upper(c: Covering, x: int) -> int:
    out = 0
    for i, cls in enumerate(_pawlak_table(c)):
        if cls & x:
            out |= 1 << i
    return out


def _pawlak_table(c: Covering) -> tuple[int, ...]:
    if not c.is_partition:
        raise ValidationError("the Pawlak pair needs a partition")

    def build():
        cls = [0] * c.n
        for b in c.masks:
            for i in iter_bits(b):
                cls[i] = b
        return tuple(cls)

    return c.cached("pawlak", build)


_IMPL = {
    Op.CL: _cl,
    Op.SL: _sl,
    Op.XL: _xl,
    Op.FH: _fh,
    Op.SH: _sh,
    Op.IH: _ih,
    Op.XH: _xh,
    Op.PAWLAK_LOWER: _pawlak_lower,
    Op.PAWLAK_UPPER: _pawlak_upper,
}


def apply_bits(kind: Op, c: Covering, x: int) -> int:
    return _IMPL[kind](c, x)


def table(kind: Op, c: Covering) -> tuple[int, ...]:
    """``kind`` evaluated on every subset, indexed by mask."""

    def build():
        limit = current_budget().single
        if c.n > limit:
            raise BudgetExceeded(
                f"a full table needs 2^{c.n} evaluations; the exhaustive limit is n <= {limit}"
            )
        f = _IMPL[kind]
        return tuple(f(c, x) for x in range(1 << c.n))

    return c.cached(("table", kind), build)


def approximate(kind: Op, c: Covering, x: SubsetMask) -> SubsetMask:
    if kind in (Op.PAWLAK_LOWER, Op.PAWLAK_UPPER):
        raise ValidationError("use pawlak() for the Pawlak pair")
    if x.universe != c.universe:
        raise ValidationError("subset and covering belong to different universes")
    return SubsetMask(_IMPL[kind](c, x.bits), c.universe)


def pawlak(p: Covering, x: SubsetMask, side: str) -> SubsetMask:
    if x.universe != p.universe:
        raise ValidationError("subset and partition belong to different universes")
    if side == "lower":
        kind = Op.PAWLAK_LOWER
    elif side == "upper":
        kind = Op.PAWLAK_UPPER
    else:
        raise ValidationError(f"side must be 'lower' or 'upper', not {side!r}")
    return SubsetMask(_IMPL[kind](p, x.bits), p.universe)


# Sweeps.

def sweep_mode(n: int, pairs: bool, mode: str = "auto", budget: Budget | None = None) -> str:
    """Resolve ``auto``/``exhaustive``/``sampled`` against the budget."""
    budget = budget or current_budget()
    limit = budget.pair if pairs else budget.single
    if mode == "auto":
        return "exhaustive" if n <= limit else "sampled"
    if mode == "exhaustive":
        if n > limit:
            raise BudgetExceeded(
                f"exhaustive {'pair' if pairs else 'subset'} sweep allowed up to n={limit}, "
                f"got n={n}; use sampled mode"
            )
        return mode
    if mode == "sampled":
        return mode
    raise ValueError(f"unknown sweep mode {mode!r}")


def duality_defect(c: Covering, lower: Op, upper: Op, mode: str = "exhaustive") -> list[SubsetMask]:
    """All ``X`` with ``lower(X) != -upper(-X)``, canonically ordered."""
    if not lower.lower or upper.lower:
        raise ValidationError("duality_defect needs a lower and an upper operator")
    sweep_mode(c.n, pairs=False, mode=mode)
    full = c.universe.full
    lo, up = table(lower, c), table(upper, c)
    return [SubsetMask(x, c.universe) for x in range(1 << c.n) if lo[x] != full ^ up[full ^ x]]


def complement_union_property(c: Covering) -> bool:
    """Is the complement of every union of blocks again a union of blocks?"""
    budget = current_budget()
    if min(c.n, len(c.masks)) > budget.single:
        raise BudgetExceeded(
            f"union sweep over {len(c.masks)} blocks exceeds the budget; use sampled mode"
        )
    unions = {0}
    for b in c.masks:
        unions |= {u | b for u in unions}
    full = c.universe.full
    return all(full ^ u in unions for u in unions)


# Pawlak-style properties.

PROPERTIES = (
    "1L", "2L", "3L", "4L", "5L", "7L", "8L", "9L",
    "1H", "2H", "3H", "4H", "5H", "7H", "8H", "9H",
    "6LH",
)
PAIR_PROPERTIES = frozenset({"4L", "4H", "7L", "7H"})


@dataclass(frozen=True)
class PropertyResult:
    prop: str
    holds: bool
    witness: tuple[int, ...] | None = None   # (X,), (X, Y) or (K,)
    sampled: bool = False


def _first_single(values: Sequence[int] | np.ndarray, pred) -> int | None:
    for x, v in enumerate(values):
        if not pred(x, v):
            return x
    return None


def _pair_violation_np(t: np.ndarray, full: int, prop: str) -> tuple[int, int] | None:
    size = len(t)
    xs = np.arange(size, dtype=np.int64)
    chunk = max(1, (1 << 20) // size)
    for start in range(0, size, chunk):
        xa = xs[start:start + chunk, None]
        ya = xs[None, :]
        if prop == "4L":
            bad = t[xa & ya] != (t[xa] & t[ya])
        elif prop == "4H":
            bad = t[xa | ya] != (t[xa] | t[ya])
        else:
            bad = ((xa & ~ya) == 0) & ((t[xa] & ~t[ya]) != 0)
        hits = np.argwhere(bad)
        if len(hits):
            i, j = hits[0]
            return int(start + i), int(j)
    return None


def _pair_violation_py(t: Sequence[int], prop: str) -> tuple[int, int] | None:
    size = len(t)
    if prop == "4L":
        for x in range(size):
            tx = t[x]
            for y in range(size):
                if t[x & y] != tx & t[y]:
                    return x, y
    elif prop == "4H":
        for x in range(size):
            tx = t[x]
            for y in range(size):
                if t[x | y] != tx | t[y]:
                    return x, y
    else:
        for x in range(size):
            tx = t[x]
            for y in range(size):
                if x & ~y == 0 and tx & ~t[y]:
                    return x, y
    return None


def check_property(prop: str, kind: Op, c: Covering, mode: str = "auto") -> PropertyResult:
    """Evaluate one Pawlak-style property of ``kind`` on covering ``c``.

    The ``L`` forms treat the operator as a lower approximation and the
    ``H`` forms as an upper one; ``6LH`` uses the dual pair from
    :data:`DUAL_PAIRS`.  Witnesses are the first violations in mask order.
    """
    if prop not in PROPERTIES:
        raise ValidationError(f"unknown property {prop!r}")
    return c.cached(("prop", prop, kind, mode), lambda: _evaluate(prop, kind, c, mode))


def _evaluate(prop: str, kind: Op, c: Covering, mode: str) -> PropertyResult:
    full = c.universe.full
    f = _IMPL[kind]
    num = prop[0]

    if num == "1":
        return PropertyResult(prop, f(c, full) == full, None if f(c, full) == full else (full,))
    if num == "2":
        return PropertyResult(prop, f(c, 0) == 0, None if f(c, 0) == 0 else (0,))
    if num == "9":
        for k in c.masks:
            if f(c, k) != k:
                return PropertyResult(prop, False, (k,))
        return PropertyResult(prop, True)

    pairs = prop in PAIR_PROPERTIES
    resolved = sweep_mode(c.n, pairs=pairs, mode=mode)

    if resolved == "sampled":
        return _sampled_property(prop, kind, c)

    if prop == "6LH":
        lo_kind, up_kind = DUAL_PAIRS[kind]
        lo, up = table(lo_kind, c), table(up_kind, c)
        bad = _first_single(lo, lambda x, v: lo[full ^ x] == full ^ up[x])
    else:
        t = table(kind, c)
        if pairs:
            if c.n > 5:
                hit = _pair_violation_np(np.asarray(t, dtype=np.int64), full, prop)
            else:
                hit = _pair_violation_py(t, prop)
            return PropertyResult(prop, hit is None, hit)
        if prop == "3L":
            bad = _first_single(t, lambda x, v: v & ~x == 0)
        elif prop == "3H":
            bad = _first_single(t, lambda x, v: x & ~v == 0)
        elif num == "5":
            bad = _first_single(t, lambda x, v: t[v] == v)
        else:  # 8L / 8H
            bad = _first_single(t, lambda x, v: t[full ^ v] == full ^ v)
    return PropertyResult(prop, bad is None, None if bad is None else (bad,))


def _sampled_property(prop: str, kind: Op, c: Covering) -> PropertyResult:
    budget = current_budget()
    rng = SplitMix64(budget.seed)
    full = c.universe.full
    f = lambda x: _IMPL[kind](c, x)  # noqa: E731
    n = c.n
    for _ in range(budget.samples):
        x = rng.bits(n)
        if prop in PAIR_PROPERTIES:
            y = rng.bits(n)
            if prop == "4L":
                ok = f(x & y) == f(x) & f(y)
            elif prop == "4H":
                ok = f(x | y) == f(x) | f(y)
            else:
                y |= x  # sample comparable pairs only
                ok = f(x) & ~f(y) == 0
            if not ok:
                return PropertyResult(prop, False, (x, y), sampled=True)
            continue
        if prop == "6LH":
            lo_kind, up_kind = DUAL_PAIRS[kind]
            ok = _IMPL[lo_kind](c, full ^ x) == full ^ _IMPL[up_kind](c, x)
        else:
            v = f(x)
            if prop == "3L":
                ok = v & ~x == 0
            elif prop == "3H":
                ok = x & ~v == 0
            elif prop[0] == "5":
                ok = f(v) == v
            else:
                ok = f(full ^ v) == full ^ v
        if not ok:
            return PropertyResult(prop, False, (x,), sampled=True)
    return PropertyResult(prop, True, sampled=True)


@dataclass(frozen=True)
class PropertyMatrix:
    covering: Covering
    entries: dict  # (Op, prop) -> PropertyResult
    sampled: bool

    def holds(self, kind: Op, prop: str) -> bool:
        return self.entries[kind, prop].holds

    def satisfied(self, kind: Op) -> list[str]:
        return [p for p in applicable_properties(kind) if self.entries[kind, p].holds]


def applicable_properties(kind: Op) -> tuple[str, ...]:
    """The properties of ``kind``'s own side, plus the complement law 6LH."""
    side = "L" if kind.lower else "H"
    return tuple(p for p in PROPERTIES if p == "6LH" or p.endswith(side))


def property_matrix(c: Covering, mode: str = "auto") -> PropertyMatrix:
    kinds = list(COVERING_OPS)
    if c.is_partition:
        kinds += [Op.PAWLAK_LOWER, Op.PAWLAK_UPPER]
    entries = {}
    for kind in kinds:
        for prop in applicable_properties(kind):
            entries[kind, prop] = check_property(prop, kind, c, mode)
    sampled = any(r.sampled for r in entries.values())
    return PropertyMatrix(c, entries, sampled)


# Properties the literature lists for each operator.
CITED_PROPERTIES = {
    Op.CL: ("1L", "2L", "3L", "5L", "7L", "9L"),
    Op.SL: ("1L", "2L", "3L", "4L", "7L"),
    Op.SH: ("1H", "2H", "3H", "4H", "7H"),
    Op.XL: ("1L", "2L", "3L", "4L", "5L", "7L", "9L"),
    Op.XH: ("1H", "2H", "3H", "4H", "5H", "7H"),
    Op.IH: ("1H", "2H", "3H", "4H", "5H", "7H", "9H"),
    Op.PAWLAK_LOWER: ("1L", "2L", "3L", "4L", "5L", "6LH", "7L", "8L", "9L"),
    Op.PAWLAK_UPPER: ("1H", "2H", "3H", "4H", "5H", "6LH", "7H", "8H", "9H"),
}
