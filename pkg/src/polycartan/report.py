"""Small shared check-result type used by verdict-producing modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.passed
