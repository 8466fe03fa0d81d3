"""Command line entry point: ``covtop info|approx|topology|verify|suite``.

Exit codes: 0 success, 1 input or usage error, 2 claim failure under
``--strict`` (or an unflagged suite failure), 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .claims import FAILS, FLAGGED, check_claim, claim_ids
from .config import BudgetExceeded
from .covering import (
    COVERING_OPS,
    Covering,
    Op,
    approximate,
    complement_union_property,
    duality_defect,
    i_family,
    is_unary,
    n_family,
)
from .io import Report, load_covering, parse_subset
from .sets import ValidationError, blocks_partition
from .suite import SuiteConfig, run_suite
from .topology import (
    connected_components,
    induced_topology,
    is_base,
    separation_profile,
)

EXIT_OK, EXIT_INPUT, EXIT_CLAIM, EXIT_BUDGET = 0, 1, 2, 3

DUALITY_TABLE = ((Op.CL, Op.FH), (Op.SL, Op.SH), (Op.XL, Op.XH), (Op.CL, Op.IH))


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(c: Covering, bits: int) -> str:
    return c.universe.render(bits)


def _names(c: Covering, bits: int) -> list[str]:
    return c.universe.names(bits)


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


# Commands build (Report, human text, exit code).

def cmd_info(c: Covering) -> tuple[Report, str, int]:
    u = c.universe
    elements = []
    rows = []
    for x, label in enumerate(u.labels):
        md = c.md_table[x]
        elements.append({
            "element": label,
            "Md": [_names(c, b) for b in md],
            "N": _names(c, c.n_table[x]),
            "I": _names(c, c.i_table[x]),
        })
        rows.append([label, "{" + ", ".join(_fmt(c, b) for b in md) + "}", _fmt(c, c.n_table[x]),
                     _fmt(c, c.i_table[x])])
    nf, inf = n_family(c), i_family(c)
    flags = {
        "unary": is_unary(c),
        "partition": c.is_partition,
        "n_partition": blocks_partition(nf.bits, u.full),
        "i_partition": blocks_partition(inf.bits, u.full),
        "complement_union": complement_union_property(c),
    }
    payload = {
        "universe": list(u.labels),
        "blocks": [_names(c, b) for b in c.masks],
        "elements": elements,
        "n_classes": [_names(c, b) for b in nf.bits],
        "i_classes": [_names(c, b) for b in inf.bits],
        **flags,
    }
    text = [f"universe  {_fmt(c, u.full)}", f"covering  {c.render()}", "",
            _table(rows, ["x", "Md(x)", "N(x)", "I(x)"]), ""]
    text.append(f"N-classes  {nf.render()}")
    text.append(f"I-classes  {inf.render()}")
    text.extend(f"{k:<17} {str(v).lower()}" for k, v in flags.items())
    return Report("info", c.fingerprint(), payload), "\n".join(text), EXIT_OK


def cmd_approx(c: Covering, op: str | None, subset: str, all_ops: bool) -> tuple[Report, str, int]:
    x = parse_subset(c.universe, subset)
    if all_ops:
        results = {k.value: approximate(k, c, x).bits for k in COVERING_OPS}
        duality = []
        for lo, up in DUALITY_TABLE:
            defect = duality_defect(c, lo, up)
            duality.append({
                "lower": lo.value,
                "upper": up.value,
                "dual": not defect,
                "defect_count": len(defect),
                "first_defect": defect[0].labels() if defect else None,
            })
        payload = {
            "set": x.labels(),
            "results": {k: _names(c, v) for k, v in results.items()},
            "duality": duality,
        }
        text = [f"X = {x}", _table([[k, _fmt(c, v)] for k, v in results.items()], ["op", "result"]), "",
                _table([[d["lower"], d["upper"], str(d["dual"]).lower(), str(d["defect_count"]),
                         _fmt(c, sum(1 << c.universe.index(s) for s in d["first_defect"]))
                         if d["first_defect"] is not None else "-"] for d in duality],
                       ["lower", "upper", "dual", "defects", "first defect"])]
        return Report("approx", c.fingerprint(), payload), "\n".join(text), EXIT_OK
    if op is None:
        raise UsageError("approx needs --op KIND or --all-ops")
    kind = Op.parse(op)
    if kind not in COVERING_OPS:
        raise UsageError(f"--op must be one of {[k.value for k in COVERING_OPS]}")
    result = approximate(kind, c, x)
    payload = {"op": kind.value, "set": x.labels(), "result": result.labels()}
    return Report("approx", c.fingerprint(), payload), f"{kind.value}({x}) = {result}", EXIT_OK


def cmd_topology(c: Covering, kind_name: str) -> tuple[Report, str, int]:
    kind = Op.parse(kind_name)
    if kind not in COVERING_OPS:
        raise UsageError(f"--kind must be one of {[k.value for k in COVERING_OPS]}")
    t = induced_topology(kind, c)
    v = t.verdict
    axioms = {
        "has_empty_and_universe": v.has_empty_and_universe,
        "closed_under_union": v.closed_under_union,
        "closed_under_intersection": v.closed_under_intersection,
        "first_violation": [_names(c, b) for b in v.first_violation] if v.first_violation else None,
    }
    payload = {
        "kind": kind.value,
        "opens": [_names(c, b) for b in t.opens.bits],
        "closed": [_names(c, b) for b in t.closed.bits],
        "axioms": axioms,
        "is_topology": v.ok,
    }
    text = [f"T_{kind.value} on {_fmt(c, c.universe.full)}",
            f"opens   {t.opens.render()}",
            f"closed  {t.closed.render()}",
            f"topology  {str(v.ok).lower()}"]
    if v.first_violation:
        a, b = v.first_violation
        text.append(f"first violation  {_fmt(c, a)}, {_fmt(c, b)}")
    if v.ok:
        prof = separation_profile(t)
        flags = prof.flags()
        payload["separation"] = flags
        payload["separation_sampled"] = prof.sampled
        payload["components"] = [_names(c, b) for b in connected_components(t).bits]
        payload["minimal_neighborhoods"] = {
            label: _names(c, t.min_nbhd[i]) for i, label in enumerate(c.universe.labels)
        }
        bases = {}
        if kind in (Op.XL, Op.CL):
            bases["N"] = is_base(t, n_family(c))
        if kind is Op.CL:
            bases["C"] = is_base(t, c.blocks)
        if kind is Op.SH:
            bases["I"] = is_base(t, i_family(c))
        payload["base_checks"] = bases
        text.append("")
        text.append(_table([[k, str(val).lower()] for k, val in flags.items()], ["property", "value"]))
        text.append("")
        text.append(f"components  {connected_components(t).render()}")
        for k, val in bases.items():
            text.append(f"{k}-family is a base  {str(val).lower()}")
    return Report("topology", c.fingerprint(), payload), "\n".join(text), EXIT_OK


def cmd_verify(c: Covering, claims: str, strict: bool) -> tuple[Report, str, int]:
    ids = claim_ids() if claims == "all" else [s.strip() for s in claims.split(",") if s.strip()]
    known = set(claim_ids())
    for cid in ids:
        if cid not in known:
            raise UsageError(f"unknown claim id {cid!r}")
    reports = [check_claim(cid, c) for cid in ids]
    rows = []
    for r in reports:
        note = ""
        if r.claim in FLAGGED and r.verdict != "not-applicable":
            note = f"forward {r.details['forward']}, reverse {r.details['reverse']}"
        elif r.direction:
            note = r.direction
        rows.append([r.claim, r.verdict, note])
    failing = [r for r in reports if r.verdict == FAILS and r.claim not in FLAGGED]
    code = EXIT_CLAIM if strict and failing else EXIT_OK
    payload = {
        "claims": [r.to_dict() for r in reports],
        "flagged": sorted(FLAGGED & set(ids)),
        "unflagged_failures": [r.claim for r in failing],
    }
    text = [_table(rows, ["claim", "verdict", "note"])]
    for r in reports:
        if r.verdict == FAILS:
            text.append(f"{r.claim}: counterexample {r.counterexample}")
    return Report("verify", c.fingerprint(), payload), "\n".join(text), code


def cmd_suite(n: int, mode: str, samples: int, seed: int, workers: int, timing: bool) -> tuple[Report, str, int]:
    from .config import current_budget

    limit = current_budget().enumerate
    if mode == "exhaustive" and n > limit:
        raise BudgetExceeded(f"exhaustive suite allowed up to n={limit}; use --mode sampled")
    report = run_suite(SuiteConfig(n_max=n, mode=mode, sample_count=samples, seed=seed, workers=workers))
    payload = report.to_dict(timing=timing)
    rows = [[cid, str(t["holds"]), str(t["fails"]), str(t["not-applicable"]),
             "flagged" if cid in FLAGGED else ""] for cid, t in report.tallies.items()]
    text = [f"mode {mode}, n <= {n}, {report.total_coverings} coverings"]
    for row in report.per_n:
        extra = f", oracle {row['oracle']} ({'agree' if row['agree'] else 'DISAGREE'})" if "oracle" in row else ""
        text.append(f"  n={row['n']}: {row['coverings']} coverings{extra}")
    text.append("")
    text.append(_table(rows, ["claim", "holds", "fails", "n/a", ""]))
    if report.truncated:
        text.append(f"TRUNCATED: {report.truncated}")
    if timing:
        text.append(f"{report.duration:.2f}s")
    bad_count = any(row.get("agree") is False for row in report.per_n)
    code = EXIT_CLAIM if report.unflagged_failures or bad_count else EXIT_OK
    if report.truncated:
        code = EXIT_BUDGET
    return Report("suite", None, payload), "\n".join(text), code


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human",
                        help="stdout format (default: human)")
    common.add_argument("--out", type=Path, help="also write the machine report to this path")

    p = _Parser(prog="covtop", description="Covering approximation operators and their topologies.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("info", parents=[common], help="Md, N, I tables and covering flags")
    s.add_argument("file", type=Path)

    s = sub.add_parser("approx", parents=[common], help="evaluate approximation operators")
    s.add_argument("file", type=Path)
    s.add_argument("--op")
    s.add_argument("--set", dest="subset", default="", help="comma separated labels; '' is the empty set")
    s.add_argument("--all-ops", action="store_true")

    s = sub.add_parser("topology", parents=[common], help="induced topology and its separation profile")
    s.add_argument("file", type=Path)
    s.add_argument("--kind", required=True)

    s = sub.add_parser("verify", parents=[common], help="check registered claims on one covering")
    s.add_argument("file", type=Path)
    s.add_argument("--claims", default="all", help="'all' or comma separated claim ids")
    s.add_argument("--strict", action="store_true", help="exit 2 if an unflagged claim fails")

    s = sub.add_parser("suite", parents=[common], help="run every claim over many coverings")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "suite":
            if args.n < 1:
                raise UsageError("--n must be at least 1")
            report, text, code = cmd_suite(args.n, args.mode, args.samples, args.seed, args.workers, args.timing)
        else:
            c = load_covering(args.file)
            if args.command == "info":
                report, text, code = cmd_info(c)
            elif args.command == "approx":
                report, text, code = cmd_approx(c, args.op, args.subset, args.all_ops)
            elif args.command == "topology":
                report, text, code = cmd_topology(c, args.kind)
            else:
                report, text, code = cmd_verify(c, args.claims, args.strict)
    except BudgetExceeded as exc:
        print(f"covtop: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValidationError, OSError) as exc:
        print(f"covtop: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.out:
        args.out.write_text(report.emit(), encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(report.emit())
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
