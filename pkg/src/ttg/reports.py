"""Structured pass/fail reports shared by the verification surfaces."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Check:
    """One verified identity: a stable id, the law checked, and the outcome."""

    check_id: str
    statement: str
    status: str
    detail: str = ""

    def to_json(self) -> dict:
        out = {"id": self.check_id, "statement": self.statement, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class CheckReport:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check_id: str, statement: str, ok: bool, detail: str = ""):
        self.checks.append(Check(check_id, statement, PASS if ok else FAIL, detail))

    def add_indeterminate(self, check_id: str, statement: str, detail: str = ""):
        self.checks.append(Check(check_id, statement, INDETERMINATE, detail))

    def extend(self, other: "CheckReport"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "counts": {
                "pass": sum(1 for c in self.checks if c.status == PASS),
                "fail": sum(1 for c in self.checks if c.status == FAIL),
                "indeterminate": sum(1 for c in self.checks if c.status == INDETERMINATE),
            },
            "checks": [c.to_json() for c in self.checks],
        }
