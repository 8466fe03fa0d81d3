import pytest
from hypothesis import given, settings

import reference as ref
from conftest import coverings, covering_and_subset
from covtop.config import BudgetExceeded
from covtop.covering import (
    CITED_PROPERTIES,
    COVERING_OPS,
    DUAL_PAIRS,
    PROPERTIES,
    Op,
    apply_bits,
    approximate,
    check_property,
    complement_union_property,
    duality_defect,
    indiscernible_neighborhood,
    is_unary,
    make_covering,
    minimal_description,
    neighborhood,
    pawlak,
    property_matrix,
    sweep_mode,
    table,
)
from covtop.config import Budget
from covtop.enumerate import enumerate_coverings
from covtop.sets import ValidationError, blocks_partition, make_universe, subset_from_labels


def ex5():
    u = make_universe("12345")
    return make_covering(u, [subset_from_labels(u, b) for b in ("15", "125", "34")])


def L(c, s):
    return subset_from_labels(c.universe, s)


# Worked example with U = {1..5}.

def test_example5_minimal_descriptions():
    c = ex5()
    md = {lab: minimal_description(c, i).names() for i, lab in enumerate("12345")}
    assert md == {"1": [["1", "5"]], "2": [["1", "2", "5"]], "3": [["3", "4"]],
                  "4": [["3", "4"]], "5": [["1", "5"]]}
    assert is_unary(c)


def test_example5_operators():
    c = ex5()
    x = L(c, "234")
    assert approximate(Op.CL, c, x) == L(c, "34")
    assert approximate(Op.FH, c, x) == c.universe.everything
    assert x in duality_defect(c, Op.CL, Op.FH)


def test_neighborhood_accessors():
    c = ex5()
    assert neighborhood(c, 1).labels() == ["1", "2", "5"]
    assert indiscernible_neighborhood(c, 0).labels() == ["1", "2", "5"]
    with pytest.raises(ValidationError):
        neighborhood(c, 7)


def test_make_covering_rejects_bad_input():
    u = make_universe("abc")
    with pytest.raises(ValidationError, match="uncovered: \\{c\\}"):
        make_covering(u, [0b011])
    with pytest.raises(ValidationError, match="empty"):
        make_covering(u, [0, 0b111])


def test_library_is_lenient_about_duplicates():
    u = make_universe("ab")
    assert make_covering(u, [3, 1, 3]).masks == (1, 3)


def test_op_parse():
    assert Op.parse("xl") is Op.XL
    with pytest.raises(ValidationError):
        Op.parse("ZZ")


# Every operator against the reference definitions.

def test_operators_match_reference_exhaustively_n3():
    for n in (1, 2, 3):
        for c in enumerate_coverings(n):
            U, C = ref.as_sets(c)
            for kind in COVERING_OPS:
                t = table(kind, c)
                for x in range(1 << n):
                    X = ref.to_labels(c.universe, x)
                    assert ref.to_labels(c.universe, t[x]) == ref.OPS[kind.value](C, U, X), (kind, c.render(), X)


@settings(max_examples=150, deadline=None)
@given(covering_and_subset(max_n=7))
def test_operators_match_reference_random(cx):
    c, x = cx
    U, C = ref.as_sets(c)
    X = ref.to_labels(c.universe, x)
    for kind in COVERING_OPS:
        got = ref.to_labels(c.universe, apply_bits(kind, c, x))
        assert got == ref.OPS[kind.value](C, U, X)


@settings(max_examples=100, deadline=None)
@given(coverings(max_n=7))
def test_neighborhood_tables_match_reference(c):
    U, C = ref.as_sets(c)
    for i, lab in enumerate(c.universe.labels):
        assert ref.to_labels(c.universe, c.n_table[i]) == ref.N(C, lab)
        assert ref.to_labels(c.universe, c.i_table[i]) == ref.I(C, lab)
        assert {ref.to_labels(c.universe, b) for b in c.md_table[i]} == ref.md(C, lab)


# Properties.

@settings(max_examples=60, deadline=None)
@given(coverings(max_n=4))
def test_property_checker_matches_reference(c):
    U, C = ref.as_sets(c)
    for kind in COVERING_OPS:
        lo, up = DUAL_PAIRS[kind]
        pair = (ref.OPS[lo.value], ref.OPS[up.value])
        for prop in PROPERTIES:
            if prop != "6LH" and prop[-1] != ("L" if kind.lower else "H"):
                continue
            got = check_property(prop, kind, c, "exhaustive").holds
            assert got == ref.property_holds(prop, ref.OPS[kind.value], pair, C, U), (kind, prop, c.render())


def test_cited_properties_hold_on_all_small_coverings():
    for n in (1, 2, 3):
        for c in enumerate_coverings(n):
            for kind in COVERING_OPS:
                for prop in CITED_PROPERTIES.get(kind, ()):
                    assert check_property(prop, kind, c).holds, (kind, prop, c.render())


def test_property_witness_is_a_real_violation():
    c = ex5()
    r = check_property("6LH", Op.CL, c)
    assert not r.holds
    (x,) = r.witness
    full = c.universe.full
    assert apply_bits(Op.CL, c, full ^ x) != full ^ apply_bits(Op.FH, c, x)


def test_sampled_mode_agrees_on_clear_cases(monkeypatch):
    monkeypatch.setenv("COVTOP_BUDGET", "samples=2000")
    c = ex5()
    assert check_property("4L", Op.XL, c, "sampled").holds
    r = check_property("4H", Op.FH, c, "sampled")
    exact = check_property("4H", Op.FH, c, "exhaustive")
    assert r.sampled and not exact.sampled
    assert r.holds == exact.holds or r.holds  # a sample can only miss a violation
    if not r.holds:
        x, y = r.witness
        f = lambda s: apply_bits(Op.FH, c, s)  # noqa: E731
        assert f(x | y) != f(x) | f(y)


def test_sweep_mode_budget():
    b = Budget(single=3, pair=2)
    assert sweep_mode(3, False, "auto", b) == "exhaustive"
    assert sweep_mode(4, False, "auto", b) == "sampled"
    assert sweep_mode(3, True, "auto", b) == "sampled"
    with pytest.raises(BudgetExceeded):
        sweep_mode(3, True, "exhaustive", b)
    with pytest.raises(ValueError):
        sweep_mode(3, True, "sometimes", b)


def test_table_respects_single_budget(monkeypatch):
    monkeypatch.setenv("COVTOP_BUDGET", "single=2")
    with pytest.raises(BudgetExceeded):
        table(Op.CL, ex5())


def test_property_matrix_includes_pawlak_only_for_partitions():
    u = make_universe("abcd")
    p = make_covering(u, [0b0011, 0b0100, 0b1000])
    m = property_matrix(p)
    assert set(m.satisfied(Op.PAWLAK_LOWER)) == {x for x in PROPERTIES if x.endswith("L") or x == "6LH"}
    assert (Op.PAWLAK_LOWER, "1L") not in property_matrix(ex5()).entries
    assert "9L" in m.satisfied(Op.CL)


def test_pawlak_pair_and_collapse_on_partition():
    u = make_universe("abcde")
    p = make_covering(u, [0b00011, 0b01100, 0b10000])
    for x in u.subsets():
        lo, up = pawlak(p, x, "lower"), pawlak(p, x, "upper")
        for kind in COVERING_OPS:
            assert approximate(kind, p, x) == (lo if kind.lower else up)
    with pytest.raises(ValidationError):
        pawlak(ex5(), u.empty, "lower")
    with pytest.raises(ValidationError):
        pawlak(p, u.empty, "middle")


def test_known_dual_pairs():
    for n in (1, 2, 3):
        for c in enumerate_coverings(n):
            assert duality_defect(c, Op.SL, Op.SH) == []
            assert duality_defect(c, Op.XL, Op.XH) == []


def _reduct(c):
    """Blocks that are not a union of other blocks."""
    keep = []
    for b in c.masks:
        acc = 0
        for o in c.masks:
            if o != b and o & ~b == 0:
                acc |= o
        if acc != b:
            keep.append(b)
    return keep


def test_cl_fh_dual_exactly_when_reduct_is_partition():
    # Answered empirically over n <= 4: partitions are dual, but so are
    # coverings whose redundant blocks sit on top of a partition.
    seen_nonpartition = False
    for n in (1, 2, 3, 4):
        for c in enumerate_coverings(n):
            dual = duality_defect(c, Op.CL, Op.FH) == []
            assert dual == blocks_partition(_reduct(c), c.universe.full), c.render()
            seen_nonpartition |= dual and not c.is_partition
    assert seen_nonpartition


def test_duality_defect_argument_order():
    with pytest.raises(ValidationError):
        duality_defect(ex5(), Op.FH, Op.CL)


def test_complement_union_property():
    u = make_universe("abc")
    assert complement_union_property(make_covering(u, [1, 6]))
    assert complement_union_property(make_covering(u, [1, 2, 4, 3]))
    assert not complement_union_property(make_covering(u, [1, 2, 7]))
