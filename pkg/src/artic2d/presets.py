"""SAMPA phoneme inventory: symbols mapped to validated control states.

The inventory lives in a data file so instructors can extend it without
touching code. Consonant presets carry a neutral vocalic context;
coarticulated contexts come from the sequencer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from . import params
from .geometry import SchemaViolation
from .params import ControlState, ValidationError

PHONEME_CLASSES = ("vowel", "plosive", "nasal", "fricative", "lateral")


class UnknownPhoneme(KeyError):
    def __init__(self, sampa: str):
        self.sampa = sampa
        super().__init__(f"unknown phoneme: {sampa!r}")


@dataclass(frozen=True)
class PhonemeEntry:
    sampa: str
    state: ControlState
    phoneme_class: str
    note: str = ""

    def to_doc(self) -> dict:
        return {
            "sampa": self.sampa,
            "class": self.phoneme_class,
            "note": self.note,
            "state": self.state.to_doc(),
        }


@dataclass(frozen=True, eq=False)
class PhonemeInventory:
    entries: tuple[PhonemeEntry, ...]

    def lookup(self, sampa: str) -> PhonemeEntry:
        for entry in self.entries:
            if entry.sampa == sampa:
                return entry
        raise UnknownPhoneme(sampa)

    def __contains__(self, sampa: str) -> bool:
        return any(e.sampa == sampa for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def load_inventory(source: Any) -> PhonemeInventory:
    """Load and validate a phoneme data document."""
    if isinstance(source, Mapping):
        doc = source
    elif isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = json.load(source)
    if doc.get("schemaVersion") != 1:
        raise SchemaViolation("schemaVersion", f"expected 1, got {doc.get('schemaVersion')!r}")
    if "phonemes" not in doc or not isinstance(doc["phonemes"], list):
        raise SchemaViolation("phonemes", "missing phoneme list")
    entries = []
    seen: set[str] = set()
    for i, raw in enumerate(doc["phonemes"]):
        path = f"phonemes[{i}]"
        for key in ("sampa", "class", "state"):
            if key not in raw:
                raise SchemaViolation(path, f"missing key {key!r}")
        sampa = raw["sampa"]
        if sampa in seen:
            raise SchemaViolation(path, f"duplicate symbol {sampa!r}")
        seen.add(sampa)
        if raw["class"] not in PHONEME_CLASSES:
            raise SchemaViolation(f"{path}.class", f"unknown class {raw['class']!r}")
        try:
            state = params.validate(raw["state"])
        except ValidationError as exc:
            raise SchemaViolation(f"{path}.state", str(exc)) from exc
        entries.append(
            PhonemeEntry(
                sampa=sampa,
                state=state,
                phoneme_class=raw["class"],
                note=raw.get("note", ""),
            )
        )
    return PhonemeInventory(tuple(entries))


def default_inventory_path() -> Path:
    return Path(__file__).parent / "data" / "phonemes.json"


def lookup(inventory: PhonemeInventory, sampa: str) -> PhonemeEntry:
    return inventory.lookup(sampa)


def list_phonemes(inventory: PhonemeInventory) -> list[PhonemeEntry]:
    """Deterministic listing: grouped by class, then by symbol."""
    rank = {cls: i for i, cls in enumerate(PHONEME_CLASSES)}
    return sorted(inventory.entries, key=lambda e: (rank[e.phoneme_class], e.sampa))
