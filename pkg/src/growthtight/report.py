"""Uniform result record for the lemma and proposition validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


@dataclass
class CheckReport:
    name: str
    ok: bool
    hypotheses_met: bool = True
    worst_slack: Fraction | float | None = None
    checked: int = 0
    violations: int = 0
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "hypotheses_met": self.hypotheses_met,
            "worst_slack": self.worst_slack,
            "checked": self.checked,
            "violations": self.violations,
            **self.details,
        }
