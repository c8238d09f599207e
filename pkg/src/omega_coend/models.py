"""Structured check reports shared by the audits"""
from typing import List

from pydantic import BaseModel, Field


class Violation(BaseModel):
    """A single failed check

    Attributes:
        kind: Violation category, e.g. MissingContraction
        subject: The cell, pair or generator the check was about
        detail: Human-readable explanation
    """

    kind: str
    subject: str
    detail: str = ""


class CheckReport(BaseModel):
    """Outcome of an audit: ok is True exactly when no violation was found"""

    ok: bool = True
    checked: int = 0
    violations: List[Violation] = Field(default_factory=list)

    def add(self, kind: str, subject: str, detail: str = "") -> None:
        self.violations.append(Violation(kind=kind, subject=subject, detail=detail))
        self.ok = False

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.checked += other.checked
        for v in other.violations:
            self.add(v.kind, v.subject, v.detail)
        return self
