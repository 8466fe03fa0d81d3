"""Registry of checkable claims about covering operators and their topologies.

Every claim is a pure function of a covering.  Three shapes occur:

* ``always``  - the statement should hold on every covering;
* ``implies`` - hypothesis => conclusion; coverings where the hypothesis
  fails are reported ``not-applicable`` rather than counted as passes;
* ``iff``     - a biconditional (or a chain of equivalent statements);
  every covering exercises it, in the ``forward`` direction when the
  hypothesis is true and ``backward`` when it is false.

``thm.tfh-tsh-containment`` is flagged: both containments are evaluated
and recorded, and its failures never fail a strict run.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable

from .covering import (
    CITED_PROPERTIES,
    COVERING_OPS,
    Covering,
    Op,
    check_property,
    complement_union_property,
    duality_defect,
    i_family,
    is_unary,
    n_family,
    table,
)
from .sets import ValidationError, blocks_partition, iter_bits
from .topology import (
    connected_components,
    fixed_points,
    image,
    induced_topology,
    is_base,
    neighborhood_criteria,
    separation_profile,
    verify_closure_axioms,
    verify_interior_axioms,
    xl_profile,
)

HOLDS = "holds"
FAILS = "fails"
NOT_APPLICABLE = "not-applicable"

FLAGGED = frozenset({"thm.tfh-tsh-containment"})


@dataclass(frozen=True)
class ClaimReport:
    claim: str
    fingerprint: str
    verdict: str
    direction: str | None = None
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ClaimReport":
        return cls(**data)


@dataclass(frozen=True)
class Claim:
    id: str
    shape: str
    statement: str
    check: Callable[[Covering], tuple]

    @property
    def flagged(self) -> bool:
        return self.id in FLAGGED


REGISTRY: dict[str, Claim] = {}


def claim(id: str, shape: str, statement: str):
    def register(fn):
        if id in REGISTRY:
            raise RuntimeError(f"duplicate claim id {id}")
        REGISTRY[id] = Claim(id, shape, statement, fn)
        return fn

    return register


# Outcome helpers.  A check returns (verdict, direction, counterexample, details).

def _names(c: Covering, bits: int) -> list[str]:
    return c.universe.names(bits)


def _family(c: Covering, family) -> list[list[str]]:
    return [c.universe.names(b) for b in family]


def _iff(hyp_name: str, hyp: bool, rhs: dict[str, bool], details: dict | None = None):
    details = dict(details or {})
    details.update({hyp_name: hyp, **rhs})
    direction = "forward" if hyp else "backward"
    bad = [k for k, v in rhs.items() if v != hyp]
    if not bad:
        return HOLDS, direction, None, details
    return FAILS, direction, {"hypothesis": {hyp_name: hyp}, "disagreeing": {k: rhs[k] for k in bad}}, details


def _implies(hyp: bool, checks: dict[str, bool], witness: dict | None = None, details: dict | None = None):
    if not hyp:
        return NOT_APPLICABLE, None, None, dict(details or {})
    details = dict(details or {})
    details.update(checks)
    bad = [k for k, v in checks.items() if not v]
    if not bad:
        return HOLDS, None, None, details
    cex = {"failed": bad}
    if witness:
        cex.update(witness)
    return FAILS, None, cex, details


def _always(checks: dict[str, bool], witness: dict | None = None, details: dict | None = None):
    verdict, _, cex, det = _implies(True, checks, witness, details)
    return verdict, None, cex, det


def _first_difference(c: Covering, left: tuple[int, ...], right: tuple[int, ...], lname: str, rname: str):
    for x, (a, b) in enumerate(zip(left, right)):
        if a != b:
            return {"X": _names(c, x), lname: _names(c, a), rname: _names(c, b)}
    return None


def _equal_tables(c: Covering, a: Op, b: Op):
    return _first_difference(c, table(a, c), table(b, c), a.value, b.value)


def _is_topology(kind: Op, c: Covering) -> bool:
    return induced_topology(kind, c).verdict.ok


def _opens(kind: Op, c: Covering) -> tuple[int, ...]:
    return induced_topology(kind, c).opens.bits


def _interior_closure_match(c: Covering, kind: Op):
    """Do XL and XH act as the interior and closure maps of T_kind?"""
    t = induced_topology(kind, c)
    if not t.verdict.ok:
        return False, {"reason": f"T_{kind.value} is not a topology"}
    xl, xh = table(Op.XL, c), table(Op.XH, c)
    for x in range(1 << c.n):
        if t.interior_bits(x) != xl[x]:
            return False, {"X": _names(c, x), "interior": _names(c, t.interior_bits(x)), "XL": _names(c, xl[x])}
        if t.closure_bits(x) != xh[x]:
            return False, {"X": _names(c, x), "closure": _names(c, t.closure_bits(x)), "XH": _names(c, xh[x])}
    return True, None


def unary_from_md_n(c: Covering) -> bool:
    return all(md == (nb,) for md, nb in zip(c.md_table, c.n_table))


def cl_meet_distributive(c: Covering) -> bool:
    return check_property("4L", Op.CL, c, "exhaustive").holds


def cl_is_interior(c: Covering) -> bool:
    return verify_interior_axioms(Op.CL, c).ok


def fh_is_closure(c: Covering) -> bool:
    return verify_closure_axioms(Op.FH, c).ok


def c_is_base_of_tcl(c: Covering) -> bool:
    t = induced_topology(Op.CL, c)
    return t.verdict.ok and is_base(t, c.blocks)


def i_partition(c: Covering) -> bool:
    return blocks_partition(i_family(c).bits, c.universe.full)


def n_partition(c: Covering) -> bool:
    return blocks_partition(n_family(c).bits, c.universe.full)


# Section: the topology of XL.

@claim("thm.txl-topology", "always", "the fixed points of XL form a topology")
def _txl_topology(c):
    v = induced_topology(Op.XL, c).verdict
    wit = None
    if v.first_violation:
        wit = {"pair": _family(c, v.first_violation)}
    return _always(
        {"O1": v.has_empty_and_universe, "O2": v.closed_under_union, "O3": v.closed_under_intersection}, wit
    )


@claim("prop.txl-image", "always",
       "T_XL = {X : XL(X) = X} = {XL(X)}; XL and XH are its interior and closure maps")
def _txl_image(c):
    t = table(Op.XL, c)
    fixed = tuple(x for x, v in enumerate(t) if v == x)
    img = tuple(sorted(set(t)))
    ok, wit = _interior_closure_match(c, Op.XL)
    return _always({"fixed_equals_image": fixed == img, "interior_closure": ok}, wit)


@claim("lemma.xl-union-form", "always", "XL(X) = union of the N(x) contained in X")
def _xl_union_form(c):
    nb = c.n_table
    xl = table(Op.XL, c)
    for x in range(1 << c.n):
        acc = 0
        for v in nb:
            if v & ~x == 0:
                acc |= v
        if acc != xl[x]:
            return _always({"union_form": False}, {"X": _names(c, x), "XL": _names(c, xl[x]), "union": _names(c, acc)})
    return _always({"union_form": True})


@claim("thm.nx-base", "always",
       "{N(x)} is a base of T_XL, N(x) is the least open set around x, components are open")
def _nx_base(c):
    t = induced_topology(Op.XL, c)
    if not t.verdict.ok:
        return _always({"topology": False})
    nb = c.n_table
    base = is_base(t, n_family(c))
    least = all(
        nb[x] & ~o == 0 for o in t.opens.bits for x in iter_bits(o)
    )
    nbhd_base = least and all(v in t.opens for v in nb)
    comps = connected_components(t)
    comps_open = all(k in t.opens for k in comps.bits)
    minimal = t.min_nbhd == nb
    return _always(
        {"base": base, "least_open": least, "neighborhood_base": nbhd_base,
         "components_open": comps_open, "min_nbhd_is_N": minimal},
        details={"compact_subset": NOT_APPLICABLE, "first_countable": NOT_APPLICABLE,
                 "locally_compact": NOT_APPLICABLE},
    )


# Separation of T_XL: topological definition versus N(x)/XH criteria.

def _separation_iff(c, name: str, extra: dict | None = None):
    crit = neighborhood_criteria(c)[name]
    rhs = {f"criterion.{k}": v for k, v in crit.criteria.items()}
    rhs.update(extra or {})
    return _iff(f"{name}.topological", crit.topological, rhs)


@claim("prop.t0-equiv", "iff", "T_XL is T0 iff x not in XH({y}) or y not in XH({x}) iff XH({x}) distinct")
def _t0(c):
    return _separation_iff(c, "t0")


@claim("prop.t1t2-equiv", "iff", "T_XL is T1 iff T2 iff XH({x}) = {x} iff the N(x) are pairwise disjoint")
def _t1t2(c):
    return _separation_iff(c, "t1", {"t2.topological": xl_profile(c).t2})


@claim("prop.regular-equiv", "iff", "T_XL is regular iff every N(x) is closed")
def _regular(c):
    return _separation_iff(c, "regular")


@claim("prop.normal-equiv", "iff", "T_XL is normal iff XH fixes the union of N(y) over every closed set")
def _normal(c):
    return _separation_iff(c, "normal")


@claim("thm.regular-implies-normal", "implies", "a regular T_XL is normal")
def _reg_normal(c):
    prof = xl_profile(c)
    return _implies(prof.regular, {"normal": prof.normal})


@claim("prop.npartition-props", "implies",
       "if {N(x)} is a partition: base, least open sets, components N(x), regular, normal")
def _npartition(c):
    hyp = n_partition(c)
    if not hyp:
        return _implies(False, {})
    t = induced_topology(Op.XL, c)
    if not t.verdict.ok:
        return _implies(True, {"topology": False})
    nb = c.n_table
    prof = xl_profile(c)
    least = all(nb[x] & ~o == 0 for o in t.opens.bits for x in iter_bits(o))
    return _implies(
        True,
        {
            "1.base": is_base(t, n_family(c)),
            "2.least_open": least,
            "3.neighborhood_base": least and all(v in t.opens for v in nb),
            "5.components": connected_components(t).bits == n_family(c).bits,
            "9.regular": prof.regular,
            "10.normal": prof.normal,
        },
        details={"4.compact_subset": NOT_APPLICABLE},
    )


# Unary coverings and CL.

def _unary_iff(c, rhs: dict[str, bool], details: dict | None = None):
    return _iff("unary", is_unary(c), rhs, details)


@claim("prop.unary-meet", "iff", "unary iff CL(X & Y) = CL(X) & CL(Y)")
def _unary_meet(c):
    r = check_property("4L", Op.CL, c, "exhaustive")
    det = {"witness": _family(c, r.witness)} if r.witness else None
    return _unary_iff(c, {"cl_meet": r.holds}, det)


@claim("prop.unary-interior", "iff", "unary iff CL is an interior operator")
def _unary_interior(c):
    return _unary_iff(c, {"cl_interior": cl_is_interior(c)})


@claim("thm.unary-tcl", "iff", "unary iff T_CL is a topology")
def _unary_tcl(c):
    return _unary_iff(c, {"tcl_topology": _is_topology(Op.CL, c)})


@claim("thm.unary-c-base", "iff", "unary iff C is a base of the topology T_CL")
def _unary_cbase(c):
    return _unary_iff(c, {"c_base": c_is_base_of_tcl(c)})


@claim("lemma.unary-cl-eq-xl", "iff", "unary iff CL = XL")
def _unary_cl_xl(c):
    diff = _equal_tables(c, Op.CL, Op.XL)
    return _unary_iff(c, {"cl_eq_xl": diff is None}, {"difference": diff} if diff else None)


@claim("thm.tcl-eq-txl", "iff", "unary iff T_CL = T_XL")
def _tcl_txl(c):
    return _unary_iff(c, {"tcl_eq_txl": _opens(Op.CL, c) == _opens(Op.XL, c)})


@claim("prop.unary-xl-xh-tcl", "iff", "unary iff XL and XH are the interior and closure maps of T_CL")
def _unary_xl_xh_tcl(c):
    ok, _ = _interior_closure_match(c, Op.CL)
    return _unary_iff(c, {"xl_xh_of_tcl": ok})


# FH.

@claim("lemma.unary-fh-closure", "iff", "unary iff FH is a closure operator")
def _unary_fh(c):
    ax = verify_closure_axioms(Op.FH, c)
    return _unary_iff(c, {"fh_closure": ax.ok}, {"failed_axioms": ax.failed()} if not ax.ok else None)


@claim("cor.fh-closure-equivs", "iff",
       "FH is a closure operator iff T_CL is a topology iff C is its base iff T_CL = T_XL "
       "iff {N(x)} is a base of T_CL iff XL, XH are its interior and closure maps")
def _fh_equivs(c):
    t = induced_topology(Op.CL, c)
    ok, _ = _interior_closure_match(c, Op.CL)
    return _iff(
        "fh_closure",
        fh_is_closure(c),
        {
            "tcl_topology": t.verdict.ok,
            "c_base": c_is_base_of_tcl(c),
            "tcl_eq_txl": _opens(Op.CL, c) == _opens(Op.XL, c),
            "n_base_of_tcl": t.verdict.ok and is_base(t, n_family(c)),
            "xl_xh_of_tcl": ok,
        },
    )


@claim("lemma.unary-md-n", "iff", "unary iff Md(x) = {N(x)} for every x")
def _unary_md(c):
    return _unary_iff(c, {"md_is_n": unary_from_md_n(c)})


@claim("prop.fh-eq-ih", "implies", "unary => FH = IH")
def _fh_ih(c):
    if not is_unary(c):
        return _implies(False, {})
    diff = _equal_tables(c, Op.FH, Op.IH)
    return _implies(True, {"fh_eq_ih": diff is None}, diff)


@claim("thm.tfh-eq-tih", "implies", "unary => T_FH = T_IH")
def _tfh_tih(c):
    if not is_unary(c):
        return _implies(False, {})
    return _implies(True, {"tfh_eq_tih": _opens(Op.FH, c) == _opens(Op.IH, c)})


# SH.

@claim("prop.sh-idem-ipart", "iff", "SH is idempotent iff {I(x)} is a partition")
def _sh_idem(c):
    r = check_property("5H", Op.SH, c, "exhaustive")
    return _iff("i_partition", i_partition(c), {"sh_idempotent": r.holds},
                {"witness": _family(c, r.witness)} if r.witness else None)


@claim("prop.sh-closure-ipart", "iff", "SH is a closure operator iff {I(x)} is a partition")
def _sh_closure(c):
    return _iff("i_partition", i_partition(c), {"sh_closure": verify_closure_axioms(Op.SH, c).ok})


@claim("thm.tsh-pseudo", "implies",
       "{I(x)} a partition => T_SH is a pseudo-discrete topology with base {I(x)}")
def _tsh_pseudo(c):
    if not i_partition(c):
        return _implies(False, {})
    t = induced_topology(Op.SH, c)
    if not t.verdict.ok:
        return _implies(True, {"topology": False})
    return _implies(
        True,
        {
            "topology": True,
            "pseudo_discrete": separation_profile(t).pseudo_discrete,
            "i_base": is_base(t, i_family(c)),
        },
    )


# Comparing the three topologies.

@claim("prop.complement-union", "implies",
       "CL, FH dual or T_FH = T_CL => the complement of any union of blocks is a union of blocks")
def _complement_union(c):
    dual = not duality_defect(c, Op.CL, Op.FH)
    same = _opens(Op.FH, c) == _opens(Op.CL, c)
    return _implies(dual or same, {"complement_union": complement_union_property(c)},
                    details={"cl_fh_dual": dual, "tfh_eq_tcl": same})


@claim("thm.tsh-eq-tcl-partition", "iff", "T_SH = T_CL iff C is a partition")
def _tsh_tcl(c):
    return _iff("partition", c.is_partition, {"tsh_eq_tcl": _opens(Op.SH, c) == _opens(Op.CL, c)})


@claim("prop.fh-sh-absorb", "implies", "unary => FH(SH(X)) = SH(X)")
def _fh_sh(c):
    if not is_unary(c):
        return _implies(False, {})
    fh, sh = table(Op.FH, c), table(Op.SH, c)
    for x in range(1 << c.n):
        if fh[sh[x]] != sh[x]:
            return _implies(True, {"absorb": False},
                            {"X": _names(c, x), "SH": _names(c, sh[x]), "FH(SH)": _names(c, fh[sh[x]])})
    return _implies(True, {"absorb": True})


def _first_outside(a: tuple[int, ...], b: tuple[int, ...]) -> int | None:
    inside = set(b)
    for x in a:
        if x not in inside:
            return x
    return None


@claim("thm.tfh-tsh-containment", "implies",
       "FH and SH closure operators => T_FH <= T_SH (the reverse containment is recorded too)")
def _tfh_tsh(c):
    if not (is_unary(c) and i_partition(c)):
        return _implies(False, {})
    tfh, tsh = _opens(Op.FH, c), _opens(Op.SH, c)
    fwd = _first_outside(tfh, tsh)
    rev = _first_outside(tsh, tfh)
    details = {
        "forward": HOLDS if fwd is None else FAILS,
        "reverse": HOLDS if rev is None else FAILS,
        "T_FH": _family(c, tfh),
        "T_SH": _family(c, tsh),
    }
    if rev is not None:
        details["reverse_witness"] = _names(c, rev)
    wit = None
    if fwd is not None:
        wit = {"open_set": _names(c, fwd), "in_T_FH": True, "in_T_SH": False}
    return _implies(True, {"T_FH <= T_SH": fwd is None}, wit, details)


_SIX = (Op.SH, Op.CL, Op.FH, Op.XL, Op.XH, Op.IH)


@claim("thm.partition-collapse", "iff", "C is a partition iff T_SH = T_CL = T_FH = T_XL = T_XH = T_IH")
def _collapse(c):
    first = _opens(_SIX[0], c)
    return _iff("partition", c.is_partition,
                {"all_equal": all(_opens(k, c) == first for k in _SIX[1:])})


# Operator property lists.

@claim("prop.operator-properties", "always",
       "each covering operator has the Pawlak-style properties the literature lists for it")
def _op_props(c):
    checks = {}
    wit = {}
    for kind in COVERING_OPS:
        for prop in CITED_PROPERTIES.get(kind, ()):
            r = check_property(prop, kind, c, "exhaustive")
            checks[f"{kind.value}.{prop}"] = r.holds
            if not r.holds and not wit:
                wit = {"operator": kind.value, "property": prop, "witness": _family(c, r.witness)}
    return _always(checks, wit)


@claim("prop.pawlak-properties", "implies", "on a partition the Pawlak pair has all listed properties")
def _pawlak_props(c):
    if not c.is_partition:
        return _implies(False, {})
    checks = {}
    for kind in (Op.PAWLAK_LOWER, Op.PAWLAK_UPPER):
        for prop in CITED_PROPERTIES[kind]:
            checks[f"{kind.value}.{prop}"] = check_property(prop, kind, c, "exhaustive").holds
    return _implies(True, checks)


@claim("prop.duality", "always", "SL, SH are dual and XL, XH are dual")
def _duality(c):
    sl = duality_defect(c, Op.SL, Op.SH)
    xl = duality_defect(c, Op.XL, Op.XH)
    wit = {}
    if sl:
        wit["SL/SH"] = _names(c, sl[0].bits)
    if xl:
        wit["XL/XH"] = _names(c, xl[0].bits)
    return _always({"sl_sh": not sl, "xl_xh": not xl}, wit)


def check_claim(claim_id: str, c: Covering) -> ClaimReport:
    try:
        entry = REGISTRY[claim_id]
    except KeyError:
        raise ValidationError(f"unknown claim id {claim_id!r}") from None
    verdict, direction, cex, details = entry.check(c)
    return ClaimReport(claim_id, c.fingerprint(), verdict, direction, cex, details)


def replay(report: ClaimReport, c: Covering) -> bool:
    """Re-evaluate a recorded failure in isolation; True if it reproduces."""
    if report.verdict != FAILS or report.fingerprint != c.fingerprint():
        return False
    again = check_claim(report.claim, Covering(c.universe, c.blocks))
    return again.verdict == FAILS and again.counterexample == report.counterexample


def claim_ids() -> list[str]:
    return list(REGISTRY)
