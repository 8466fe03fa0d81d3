"""Run the claim registry over enumerated or sampled coverings."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice, repeat

from .claims import FAILS, FLAGGED, HOLDS, NOT_APPLICABLE, check_claim, claim_ids
from .config import current_budget
from .covering import Covering
from .enumerate import count_coverings, default_universe, enumerate_coverings, sample_coverings
from .sets import SetFamily, ValidationError


@dataclass(frozen=True)
class SuiteConfig:
    n_max: int
    mode: str = "exhaustive"
    sample_count: int = 1000
    seed: int = 0
    workers: int = 1
    claims: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValidationError("n_max must be at least 1")
        if self.mode not in ("exhaustive", "sampled"):
            raise ValidationError(f"mode must be exhaustive or sampled, not {self.mode!r}")
        if self.sample_count < 1:
            raise ValidationError("sample_count must be positive")
        known = set(claim_ids())
        for cid in self.claims or ():
            if cid not in known:
                raise ValidationError(f"unknown claim id {cid!r}")


@dataclass
class SuiteReport:
    config: SuiteConfig
    per_n: list = field(default_factory=list)
    tallies: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    truncated: str | None = None
    duration: float = 0.0

    @property
    def total_coverings(self) -> int:
        return sum(row["coverings"] for row in self.per_n)

    @property
    def unflagged_failures(self) -> list:
        return [f for f in self.failures if not f["flagged"]]

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "n_max": self.config.n_max,
            "mode": self.config.mode,
            "seed": self.config.seed if self.config.mode == "sampled" else None,
            "sample_count": self.config.sample_count if self.config.mode == "sampled" else None,
            "per_n": self.per_n,
            "total_coverings": self.total_coverings,
            "tallies": self.tallies,
            "flagged_claims": sorted(FLAGGED & set(self.tallies)),
            "failures": self.failures,
            "truncated": self.truncated,
        }
        if timing:
            out["duration_seconds"] = round(self.duration, 3)
        return out


def _evaluate(masks_by_n: list[tuple[int, tuple[int, ...]]], ids: tuple[str, ...]) -> list[tuple]:
    out = []
    universes = {}
    for n, masks in masks_by_n:
        u = universes.setdefault(n, default_universe(n))
        c = Covering(u, SetFamily(u, masks))
        out.append((masks, [check_claim(cid, c).to_dict() for cid in ids]))
    return out


def _chunks(iterable, size):
    it = iter(iterable)
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def run_suite(config: SuiteConfig) -> SuiteReport:
    """Evaluate every selected claim on every covering for n = 1..n_max.

    Exhaustive mode also checks the enumerator against the counting oracle.
    Sampled mode draws ``sample_count`` coverings per ``n`` from a
    SplitMix64 stream seeded with ``seed + n``.  Results are merged in
    covering order, so worker count never changes the report.
    """
    start = time.perf_counter()
    ids = tuple(config.claims or claim_ids())
    report = SuiteReport(config)
    report.tallies = {
        cid: {HOLDS: 0, FAILS: 0, NOT_APPLICABLE: 0, "forward": 0, "backward": 0} for cid in ids
    }
    limit = current_budget().enumerate
    n_top = config.n_max
    if config.mode == "exhaustive" and n_top > limit:
        report.truncated = (
            f"exhaustive enumeration stops at n={limit}; n={limit + 1}..{n_top} not evaluated"
        )
        n_top = limit

    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for n in range(1, n_top + 1):
            if config.mode == "exhaustive":
                source = enumerate_coverings(n)
            else:
                source = sample_coverings(n, config.sample_count, config.seed + n)
            u = default_universe(n)
            seen = 0
            batches = ([(n, c.masks) for c in chunk] for chunk in _chunks(source, 512))
            if pool is None:
                results = (_evaluate(b, ids) for b in batches)
            else:
                results = pool.map(_evaluate, batches, repeat(ids))
            for batch in results:
                for masks, reports in batch:
                    seen += 1
                    for r in reports:
                        tally = report.tallies[r["claim"]]
                        tally[r["verdict"]] += 1
                        if r["direction"]:
                            tally[r["direction"]] += 1
                        if r["verdict"] == FAILS:
                            report.failures.append(_failure_row(r, n, u, masks))
            row = {"n": n, "coverings": seen}
            if config.mode == "exhaustive":
                oracle = count_coverings(n)
                row.update(oracle=oracle, agree=oracle == seen)
            report.per_n.append(row)
    finally:
        if pool is not None:
            pool.shutdown()
    report.duration = time.perf_counter() - start
    return report


def _failure_row(r: dict, n: int, u, masks) -> dict:
    return {
        "claim": r["claim"],
        "n": n,
        "fingerprint": r["fingerprint"],
        "covering": [u.names(m) for m in masks],
        "flagged": r["claim"] in FLAGGED,
        "counterexample": r["counterexample"],
        "details": r["details"],
    }
