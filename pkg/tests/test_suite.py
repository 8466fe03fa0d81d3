import json

import pytest

from covtop.claims import FLAGGED, ClaimReport, replay
from covtop.covering import make_covering
from covtop.sets import ValidationError
from covtop.enumerate import default_universe
from covtop.suite import SuiteConfig, run_suite


def test_config_validation():
    with pytest.raises(ValidationError):
        SuiteConfig(n_max=0)
    with pytest.raises(ValidationError):
        SuiteConfig(n_max=2, mode="random")
    with pytest.raises(ValidationError):
        SuiteConfig(n_max=2, claims=("no.such",))


def test_exhaustive_n3_counts_and_no_unflagged_failures():
    r = run_suite(SuiteConfig(n_max=3))
    assert [row["coverings"] for row in r.per_n] == [1, 5, 109]
    assert all(row["agree"] for row in r.per_n)
    assert r.total_coverings == 115
    assert r.unflagged_failures == []
    assert r.truncated is None
    for cid, tally in r.tallies.items():
        assert tally["holds"] + tally["fails"] + tally["not-applicable"] == 115


def test_report_is_deterministic_and_worker_independent():
    a = run_suite(SuiteConfig(n_max=3, claims=("thm.tfh-tsh-containment", "prop.t0-equiv")))
    b = run_suite(SuiteConfig(n_max=3, claims=("thm.tfh-tsh-containment", "prop.t0-equiv"), workers=2))
    dump = lambda r: json.dumps(r.to_dict(), sort_keys=True)  # noqa: E731
    assert dump(a) == dump(b)
    assert "duration_seconds" not in a.to_dict()
    assert "duration_seconds" in a.to_dict(timing=True)


def test_flagged_failures_replay():
    r = run_suite(SuiteConfig(n_max=3, claims=("thm.tfh-tsh-containment",)))
    assert r.failures and all(f["flagged"] for f in r.failures)
    for f in r.failures[:10]:
        u = default_universe(f["n"])
        c = make_covering(u, [sum(1 << u.index(x) for x in block) for block in f["covering"]])
        report = ClaimReport(f["claim"], f["fingerprint"], "fails", None, f["counterexample"], f["details"])
        assert c.fingerprint() == f["fingerprint"]
        assert replay(report, c)


def test_sampled_mode_is_seeded():
    cfg = SuiteConfig(n_max=5, mode="sampled", sample_count=15, seed=3, claims=("prop.t0-equiv",))
    a, b = run_suite(cfg), run_suite(cfg)
    assert a.to_dict() == b.to_dict()
    assert [row["coverings"] for row in a.per_n] == [15] * 5
    assert "oracle" not in a.per_n[0]


def test_exhaustive_over_budget_is_truncated():
    r = run_suite(SuiteConfig(n_max=5, claims=("prop.t0-equiv",)))
    assert r.truncated and [row["n"] for row in r.per_n] == [1, 2, 3, 4]


def test_flagged_set():
    assert FLAGGED == {"thm.tfh-tsh-containment"}
