"""Structured evidence for empirically checked claims."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Formula value against observation, with witnesses on disagreement.

    ``ok`` is the verdict the caller should act on; for informational
    reports (e.g. counts whose meaning is ambiguous) it stays True even when
    the two numbers differ, and ``note`` explains why.
    """

    claim: str
    formula_value: Any = None
    observed_value: Any = None
    witnesses: list = field(default_factory=list)
    ok: bool = True
    note: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "claim": self.claim,
            "formula_value": self.formula_value,
            "observed_value": self.observed_value,
            "witnesses": self.witnesses,
            "ok": self.ok,
        }
        if self.note:
            out["note"] = self.note
        if self.extra:
            out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
