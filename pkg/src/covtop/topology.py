"""Topologies induced by approximation operators on a finite universe.

A lower operator induces the family of its fixed points; an upper operator
induces the complements of its fixed points.  The families are always
returned together with an axiom verdict, so a candidate that fails to be a
topology (``T_CL`` of a non-unary covering, say) can still be inspected.

On a finite carrier arbitrary unions reduce to finite ones and every point
has a smallest open neighborhood, the intersection of the open sets
containing it.  Interiors, closures, components and separation checks are
all computed from those minimal neighborhoods.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import BudgetExceeded, current_budget
from .covering import (
    Covering,
    Op,
    check_property,
    table,
)
from .rng import SplitMix64
from .sets import SetFamily, SubsetMask, Universe, ValidationError, iter_bits


@dataclass(frozen=True)
class AxiomVerdict:
    has_empty_and_universe: bool
    closed_under_union: bool
    closed_under_intersection: bool
    first_violation: tuple[int, int] | None = None
    union_witness: tuple[int, int] | None = None
    intersection_witness: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.has_empty_and_universe and self.closed_under_union and self.closed_under_intersection


def _first_unclosed(family: tuple[int, ...], member, union: bool) -> tuple[int, int] | None:
    m = len(family)
    combine = (lambda a, b: a | b) if union else (lambda a, b: a & b)
    if m <= 256:
        for i in range(m):
            a = family[i]
            for j in range(i + 1, m):
                if combine(a, family[j]) not in member:
                    return a, family[j]
        return None
    arr = np.asarray(family, dtype=np.int64)
    table_ = np.zeros(int(arr.max()) + 1 if m else 1, dtype=bool)
    table_[arr] = True
    op = np.bitwise_or if union else np.bitwise_and
    for i in range(m - 1):
        combined = op(arr[i], arr[i + 1:])
        ok = np.zeros(len(combined), dtype=bool)
        inside = combined < len(table_)
        ok[inside] = table_[combined[inside]]
        bad = np.flatnonzero(~ok)
        if len(bad):
            return int(arr[i]), int(arr[i + 1 + bad[0]])
    return None


def verify_topology_axioms(f: SetFamily, u: Universe) -> AxiomVerdict:
    if f.universe != u:
        raise ValidationError("family and universe differ")
    family = f.bits
    member = f._lookup
    o1 = 0 in member and u.full in member
    uw = _first_unclosed(family, member, union=True)
    iw = _first_unclosed(family, member, union=False)
    return AxiomVerdict(
        has_empty_and_universe=o1,
        closed_under_union=uw is None,
        closed_under_intersection=iw is None,
        first_violation=uw if uw is not None else iw,
        union_witness=uw,
        intersection_witness=iw,
    )


@dataclass(frozen=True)
class Topology:
    universe: Universe
    opens: SetFamily
    verdict: AxiomVerdict
    source: str | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def _memo(self, key, compute):
        try:
            return self._cache[key]
        except KeyError:
            return self._cache.setdefault(key, compute())

    def require_verified(self) -> None:
        if not self.verdict.ok:
            raise ValidationError(
                f"family{' induced by ' + self.source if self.source else ''} is not a topology"
            )

    @property
    def closed(self) -> SetFamily:
        full = self.universe.full
        return self._memo("closed", lambda: SetFamily.of(self.universe, (full ^ o for o in self.opens.bits)))

    @property
    def min_nbhd(self) -> tuple[int, ...]:
        """Smallest open set containing each point."""
        self.require_verified()

        def build():
            full = self.universe.full
            out = []
            for x in range(self.universe.n):
                acc = full
                for o in self.opens.bits:
                    if o >> x & 1:
                        acc &= o
                out.append(acc)
            return tuple(out)

        return self._memo("min_nbhd", build)

    def hull(self, bits: int) -> int:
        """Smallest open superset of ``bits``."""
        nb = self.min_nbhd
        out = 0
        for i in iter_bits(bits):
            out |= nb[i]
        return out

    def interior_bits(self, bits: int) -> int:
        memo = self._memo("interior", dict)
        try:
            return memo[bits]
        except KeyError:
            pass
        out = 0
        for nb in self.min_nbhd:
            if nb & ~bits == 0:
                out |= nb
        return memo.setdefault(bits, out)

    def closure_bits(self, bits: int) -> int:
        full = self.universe.full
        return full ^ self.interior_bits(full ^ bits)

    def render(self) -> str:
        return self.opens.render()


def make_topology(u: Universe, family, source: str | None = None) -> Topology:
    f = family if isinstance(family, SetFamily) else SetFamily.of(u, family)
    return Topology(u, f, verify_topology_axioms(f, u), source)


def fixed_points(kind: Op, c: Covering) -> SetFamily:
    def build():
        t = table(kind, c)
        fixed = tuple(x for x, v in enumerate(t) if v == x)
        if kind is Op.XL:
            image = tuple(sorted(set(t)))
            if image != fixed:
                raise RuntimeError("XL fixed points differ from the XL image")
        return SetFamily(c.universe, fixed)

    return c.cached(("fixed", kind), build)


def image(kind: Op, c: Covering) -> SetFamily:
    return SetFamily(c.universe, tuple(sorted(set(table(kind, c)))))


def induced_topology(kind: Op, c: Covering) -> Topology:
    def build():
        fixed = fixed_points(kind, c)
        if kind.lower:
            opens = fixed
        else:
            full = c.universe.full
            opens = SetFamily.of(c.universe, (full ^ x for x in fixed.bits))
        return make_topology(c.universe, opens, kind.value)

    return c.cached(("topology", kind), build)


@dataclass(frozen=True)
class OperatorAxioms:
    kind: Op
    form: str                      # "closure" or "interior"
    results: dict                  # axiom label -> PropertyResult

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.holds]


_CLOSURE_FORM = {"I": "4H", "II": "3H", "III": "2H", "IV": "5H"}
_INTERIOR_FORM = {"I": "4L", "II": "3L", "III": "1L", "IV": "5L"}


def verify_closure_axioms(kind: Op, c: Covering, mode: str = "exhaustive") -> OperatorAxioms:
    if kind.lower:
        raise ValidationError(f"{kind.value} is a lower operator; use verify_interior_axioms")
    return OperatorAxioms(
        kind, "closure", {ax: check_property(p, kind, c, mode) for ax, p in _CLOSURE_FORM.items()}
    )


def verify_interior_axioms(kind: Op, c: Covering, mode: str = "exhaustive") -> OperatorAxioms:
    if not kind.lower:
        raise ValidationError(f"{kind.value} is an upper operator; use verify_closure_axioms")
    return OperatorAxioms(
        kind, "interior", {ax: check_property(p, kind, c, mode) for ax, p in _INTERIOR_FORM.items()}
    )


def interior(t: Topology, x: SubsetMask) -> SubsetMask:
    t.require_verified()
    if x.universe != t.universe:
        raise ValidationError("subset and topology belong to different universes")
    return SubsetMask(t.interior_bits(x.bits), t.universe)


def closure(t: Topology, x: SubsetMask) -> SubsetMask:
    t.require_verified()
    if x.universe != t.universe:
        raise ValidationError("subset and topology belong to different universes")
    return SubsetMask(t.closure_bits(x.bits), t.universe)


def is_base(t: Topology, f: SetFamily) -> bool:
    t.require_verified()
    members = t.opens._lookup
    if any(b not in members for b in f.bits):
        return False
    for o in t.opens.bits:
        acc = 0
        for b in f.bits:
            if b & ~o == 0:
                acc |= b
        if acc != o:
            return False
    return True


def minimal_open_neighborhood(t: Topology, x: int) -> SubsetMask:
    if not 0 <= x < t.universe.n:
        raise ValidationError(f"element index {x} out of range")
    return SubsetMask(t.min_nbhd[x], t.universe)


def _classes(bits: int, linked) -> list[int]:
    """Union-find over the points of ``bits``; ``linked(x)`` gives x's neighbors."""
    parent = {x: x for x in iter_bits(bits)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in parent:
        for y in iter_bits(linked(x) & bits):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, int] = {}
    for x in parent:
        r = find(x)
        groups[r] = groups.get(r, 0) | 1 << x
    return sorted(groups.values())


def connected_components(t: Topology) -> SetFamily:
    nb = t.min_nbhd
    return SetFamily(t.universe, tuple(_classes(t.universe.full, lambda x: nb[x])))


def is_connected(t: Topology, bits: int) -> bool:
    """Connectedness of ``bits`` as a subspace; the empty set counts as connected."""
    nb = t.min_nbhd
    return len(_classes(bits, lambda x: nb[x])) <= 1


@dataclass(frozen=True)
class SeparationProfile:
    t0: bool
    t1: bool
    t2: bool
    regular: bool
    normal: bool
    pseudo_discrete: bool
    locally_connected: bool
    witnesses: dict
    sampled: bool = False

    def flags(self) -> dict[str, bool]:
        return {
            "t0": self.t0,
            "t1": self.t1,
            "t2": self.t2,
            "regular": self.regular,
            "normal": self.normal,
            "pseudo_discrete": self.pseudo_discrete,
            "locally_connected": self.locally_connected,
        }


def _pairs_of(items: tuple[int, ...], sample: bool):
    if not sample:
        for a in items:
            for b in items:
                yield a, b
        return
    budget = current_budget()
    rng = SplitMix64(budget.seed)
    m = len(items)
    width = max(1, (m - 1).bit_length())
    for _ in range(budget.samples):
        i = rng.bits(width) % m
        j = rng.bits(width) % m
        yield items[i], items[j]


def separation_profile(t: Topology) -> SeparationProfile:
    t.require_verified()
    n = t.universe.n
    opens = t.opens.bits
    closed = t.closed.bits
    nb = t.min_nbhd
    witnesses: dict[str, tuple] = {}

    def first(name, gen):
        for w in gen:
            witnesses[name] = w
            return False
        return True

    t0 = first("t0", (
        (x, y) for x in range(n) for y in range(x + 1, n)
        if not any((o >> x & 1) != (o >> y & 1) for o in opens)
    ))
    t1 = first("t1", (
        (x, y) for x in range(n) for y in range(n)
        if x != y and not any(o >> x & 1 and not o >> y & 1 for o in opens)
    ))
    t2 = first("t2", (
        (x, y) for x in range(n) for y in range(x + 1, n) if nb[x] & nb[y]
    ))
    regular = first("regular", (
        (a, x) for a in closed for x in range(n)
        if not a >> x & 1 and t.hull(a) & nb[x]
    ))
    limit = 1 << (2 * current_budget().pair)
    sampled = len(closed) ** 2 > limit
    hulls = {a: t.hull(a) for a in closed}
    normal = first("normal", (
        (a, b) for a, b in _pairs_of(closed, sampled)
        if not a & b and hulls[a] & hulls[b]
    ))
    closed_set = t.closed._lookup
    pseudo = first("pseudo_discrete", ((o,) for o in opens if o not in closed_set))
    local = first("locally_connected", ((x,) for x in range(n) if not is_connected(t, nb[x])))
    return SeparationProfile(t0, t1, t2, regular, normal, pseudo, local, witnesses, sampled)


@dataclass(frozen=True)
class CriterionCheck:
    topological: bool
    criteria: dict          # criterion name -> bool

    @property
    def agree(self) -> bool:
        return all(v == self.topological for v in self.criteria.values())


def neighborhood_criteria(c: Covering) -> dict[str, CriterionCheck]:
    """Separation of ``T_XL`` two ways: by definition and through ``N(x)``/``XH``.

    The criteria never look at the open family of ``T_XL``; closed sets
    come from the fixed points of ``XH``.
    """
    budget = current_budget()
    if c.n > budget.single:
        raise BudgetExceeded(f"criteria sweep needs n <= {budget.single}, got n={c.n}")
    prof = c.cached("xl_profile", lambda: separation_profile(induced_topology(Op.XL, c)))
    n = c.n
    nb = c.n_table
    xh = table(Op.XH, c)
    closed = fixed_points(Op.XH, c).bits
    if len(closed) ** 2 > 1 << (2 * budget.pair):
        raise BudgetExceeded(f"{len(closed)} closed sets exceed the pair sweep budget")
    pts = range(n)

    def union_n(bits):
        out = 0
        for i in iter_bits(bits):
            out |= nb[i]
        return out

    t0 = {
        "xh_points": all(not xh[1 << y] >> x & 1 or not xh[1 << x] >> y & 1
                         for x in pts for y in pts if x != y),
        "xh_distinct": len({xh[1 << x] for x in pts}) == n,
    }
    t1 = {
        "xh_points": all(not xh[1 << y] >> x & 1 and not xh[1 << x] >> y & 1
                         for x in pts for y in pts if x != y),
        "xh_singletons": all(xh[1 << x] == 1 << x for x in pts),
        "n_disjoint": all(not nb[x] & nb[y] for x in pts for y in pts if x != y),
    }
    t2 = dict(t1)
    regular = {
        "closed_point_disjoint": all(
            not nb[x] & nb[y]
            for a in closed for x in pts if not a >> x & 1
            for y in iter_bits(a)
        ),
        "n_disjoint_or_equal": all(not nb[x] & nb[y] or nb[x] == nb[y] for x in pts for y in pts),
        "n_closed": all(xh[nb[x]] == nb[x] for x in pts),
    }
    normal = {
        "closed_pair_disjoint": all(
            not nb[x] & nb[y]
            for a in closed for b in closed if not a & b
            for x in iter_bits(a) for y in iter_bits(b)
        ),
        "xh_fixes_union": all(xh[union_n(a)] == union_n(a) for a in closed),
    }
    return {
        "t0": CriterionCheck(prof.t0, t0),
        "t1": CriterionCheck(prof.t1, t1),
        "t2": CriterionCheck(prof.t2, t2),
        "regular": CriterionCheck(prof.regular, regular),
        "normal": CriterionCheck(prof.normal, normal),
    }


def xl_profile(c: Covering) -> SeparationProfile:
    return c.cached("xl_profile", lambda: separation_profile(induced_topology(Op.XL, c)))
