"""Verdict records shared by the verification code."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Verdict:
    check: str
    passed: bool
    witness: object = None
    status: str = ""  # PASS, FAIL or SKIPPED; derived from ``passed`` when empty
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.status:
            self.status = "PASS" if self.passed else "FAIL"

    def __bool__(self):
        return self.passed

    @classmethod
    def skipped(cls, check: str, reason: str) -> "Verdict":
        return cls(check, False, {"skipped_because": reason}, "SKIPPED")

    def to_json(self) -> dict:
        out = {"check": self.check, "pass": self.passed, "status": self.status, "witness": self.witness}
        if self.detail:
            out["detail"] = self.detail
        return out
