"""Covering documents and machine-readable reports.

A covering document is UTF-8 JSON::

    {"universe": ["a", "b", "c"], "covering": [["a"], ["b"], ["a", "b", "c"]]}

Reports are JSON objects with a ``schema_version`` field; emission is
canonical (sorted keys, fixed indentation) so equal reports are equal
bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .sets import SubsetMask, Universe, ValidationError, make_universe, subset_from_labels

if TYPE_CHECKING:
    from .covering import Covering

SCHEMA_VERSION = "1"


def covering_fingerprint(c: "Covering") -> str:
    payload = json.dumps([c.n, list(c.masks)], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class CoveringDocument:
    universe: tuple[str, ...]
    covering: tuple[tuple[str, ...], ...]

    def to_json(self) -> str:
        return json.dumps(
            {"universe": list(self.universe), "covering": [list(b) for b in self.covering]},
            ensure_ascii=False,
        )

    def build(self) -> "Covering":
        """Strict conversion: duplicate blocks are an error, not silently merged."""
        from .covering import make_covering

        u = make_universe(self.universe)
        masks = []
        seen: dict[int, int] = {}
        for i, block in enumerate(self.covering):
            try:
                m = subset_from_labels(u, block)
            except ValidationError as exc:
                raise ValidationError(f"covering[{i}]: {exc}") from None
            if not m:
                raise ValidationError(f"covering[{i}]: empty block")
            if m.bits in seen:
                raise ValidationError(
                    f"covering[{i}]: duplicate of covering[{seen[m.bits]}] ({u.render(m.bits)})"
                )
            seen[m.bits] = i
            masks.append(m)
        return make_covering(u, masks)


def parse_covering_document(text: str) -> CoveringDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ValidationError("top level must be an object with 'universe' and 'covering'")
    for key in ("universe", "covering"):
        if key not in data:
            raise ValidationError(f"missing field '{key}'")
    extra = sorted(set(data) - {"universe", "covering"})
    if extra:
        raise ValidationError(f"unexpected field(s): {', '.join(extra)}")
    universe = data["universe"]
    if not isinstance(universe, list) or not all(isinstance(s, str) for s in universe):
        raise ValidationError("universe: expected a list of strings")
    blocks = data["covering"]
    if not isinstance(blocks, list):
        raise ValidationError("covering: expected a list of lists of strings")
    for i, block in enumerate(blocks):
        if not isinstance(block, list) or not all(isinstance(s, str) for s in block):
            raise ValidationError(f"covering[{i}]: expected a list of strings")
    return CoveringDocument(tuple(universe), tuple(tuple(b) for b in blocks))


def load_covering(path: str | Path) -> "Covering":
    text = Path(path).read_text(encoding="utf-8")
    return parse_covering_document(text).build()


def document_from_covering(c: "Covering") -> CoveringDocument:
    return CoveringDocument(c.universe.labels, tuple(tuple(c.universe.names(b)) for b in c.masks))


def parse_subset(u: Universe, text: str) -> SubsetMask:
    """Comma separated labels; the empty string is the empty set."""
    items = [s.strip() for s in text.split(",")] if text.strip() else []
    return subset_from_labels(u, items)


@dataclass(frozen=True)
class Report:
    command: str
    input_fingerprint: str | None
    payload: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "input_fingerprint": self.input_fingerprint,
            "payload": self.payload,
        }

    def emit(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Report":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValidationError(f"unsupported report schema {data.get('schema_version')!r}")
        return cls(
            command=data["command"],
            input_fingerprint=data["input_fingerprint"],
            payload=data["payload"],
            schema_version=data["schema_version"],
        )
