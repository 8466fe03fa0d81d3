import json
from pathlib import Path

import pytest

from covtop.cli import main
from covtop.io import Report

DATA = Path(__file__).resolve().parent.parent / "data"
EX3, EX5, PART = DATA / "example3.json", DATA / "example5.json", DATA / "partition.json"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_info_json(capsys):
    code, out, _ = run(capsys, "info", EX5, "--format", "json")
    assert code == 0
    rep = Report.parse(out)
    assert rep.command == "info" and rep.payload["unary"] is True
    md = {e["element"]: e["Md"] for e in rep.payload["elements"]}
    assert md["2"] == [["1", "2", "5"]] and md["3"] == [["3", "4"]]


def test_info_human(capsys):
    code, out, _ = run(capsys, "info", EX3)
    assert code == 0 and "Md(x)" in out and "unary             true" in out


def test_approx_single_and_all(capsys):
    code, out, _ = run(capsys, "approx", EX5, "--op", "FH", "--set", "2,3,4")
    assert code == 0 and out.strip() == "FH({2,3,4}) = {1,2,3,4,5}"
    code, out, _ = run(capsys, "approx", EX5, "--all-ops", "--set", "2,3,4", "--format", "json")
    p = json.loads(out)["payload"]
    assert p["results"]["CL"] == ["3", "4"]
    row = next(d for d in p["duality"] if d["lower"] == "CL" and d["upper"] == "FH")
    assert not row["dual"]


def test_topology_writes_out_file(capsys, tmp_path):
    dest = tmp_path / "t.json"
    code, out, _ = run(capsys, "topology", EX3, "--kind", "XL", "--out", dest)
    assert code == 0 and "opens   {∅, {a}, {b}, {a,b}, {a,b,c}}" in out
    p = Report.parse(dest.read_text(encoding="utf-8")).payload
    assert p["separation"]["normal"] is True and p["separation"]["regular"] is False
    assert p["base_checks"] == {"N": True}


def test_topology_not_a_topology(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"universe": ["a","b","c"], "covering": [["a","b"], ["b","c"]]}')
    code, out, _ = run(capsys, "topology", p, "--kind", "CL", "--format", "json")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["is_topology"] is False
    assert payload["axioms"]["first_violation"] == [["a", "b"], ["b", "c"]]
    assert "separation" not in payload


def test_verify_strict_passes_with_flagged_failure(capsys):
    code, out, _ = run(capsys, "verify", EX5, "--strict", "--format", "json")
    assert code == 0
    p = json.loads(out)["payload"]
    assert p["unflagged_failures"] == []
    flagged = next(r for r in p["claims"] if r["claim"] == "thm.tfh-tsh-containment")
    assert flagged["verdict"] == "fails"


def test_verify_strict_exit_2_on_unflagged_failure(capsys, monkeypatch):
    from covtop import claims

    entry = claims.REGISTRY["thm.txl-topology"]
    fake = claims.Claim(entry.id, entry.shape, entry.statement, lambda c: ("fails", None, {"x": 1}, {}))
    monkeypatch.setitem(claims.REGISTRY, "thm.txl-topology", fake)
    code, _, _ = run(capsys, "verify", EX5, "--claims", "thm.txl-topology", "--strict")
    assert code == 2
    code, _, _ = run(capsys, "verify", EX5, "--claims", "thm.txl-topology")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["info", "missing.json"],
    ["approx", "EX5", "--op", "ZZ", "--set", "1"],
    ["approx", "EX5", "--op", "CL", "--set", "9"],
    ["approx", "EX5", "--set", "1"],
    ["verify", "EX5", "--claims", "bogus"],
    ["topology", "EX5"],
    ["frobnicate"],
    ["suite", "--n", "0"],
])
def test_input_errors_exit_1(capsys, argv):
    argv = [str(EX5) if a == "EX5" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("covtop:")


def test_bad_document_exit_1(capsys, tmp_path):
    p = tmp_path / "dup.json"
    p.write_text('{"universe": ["a"], "covering": [["a"], ["a"]]}')
    code, _, err = run(capsys, "info", p)
    assert code == 1 and "duplicate" in err


def test_suite_exhaustive_over_budget_exit_3(capsys):
    code, _, err = run(capsys, "suite", "--n", "5", "--mode", "exhaustive")
    assert code == 3 and "sampled" in err


def test_suite_sampled_runs(capsys):
    code, out, _ = run(capsys, "suite", "--n", "5", "--mode", "sampled", "--samples", "5", "--seed", "1",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["payload"]["total_coverings"] == 25


def test_suite_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "suite", "--n", "2", "--out", a)[0] == 0
    assert run(capsys, "suite", "--n", "2", "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
