"""Sweep budgets shared by every module.

The defaults can be overridden through the ``COVTOP_BUDGET`` environment
variable, a comma separated list of ``key=value`` pairs, e.g.
``COVTOP_BUDGET="single=12,pair=8,enumerate=3"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "COVTOP_BUDGET"


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive sweep would exceed the configured budget."""


@dataclass(frozen=True)
class Budget:
    max_n: int = 24          # hard ceiling on universe size
    single: int = 14         # exhaustive single-subset sweeps up to this n
    pair: int = 10           # exhaustive subset-pair sweeps up to this n
    enumerate: int = 4       # exhaustive covering enumeration up to this n
    samples: int = 100_000   # sample size once a sweep goes over budget
    seed: int = 0x5EED

    def with_overrides(self, spec: str) -> "Budget":
        known = {f.name for f in fields(self)}
        updates = {}
        for item in filter(None, (s.strip() for s in spec.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ValueError(f"bad {ENV_VAR} entry {item!r}; keys are {sorted(known)}")
            updates[key] = int(value, 0)
        return replace(self, **updates)


def current_budget() -> Budget:
    spec = os.environ.get(ENV_VAR)
    return Budget().with_overrides(spec) if spec else Budget()
