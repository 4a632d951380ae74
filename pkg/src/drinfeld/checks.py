"""
Pass/fail rows produced by the verification routines.

Verification never raises on a failed identity; it records a CheckResult.
A check that could not be evaluated is recorded as skipped and counts as
neither a pass nor a failure.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """One verified (or refuted, or skipped) property."""
    name: str
    passed: bool
    detail: str = ""
    skipped: bool = False

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "skipped": self.skipped}


@dataclass
class Report:
    """Ordered collection of checks for one subject (a module, a chain, a point)."""
    subject: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> CheckResult:
        result = CheckResult(name, bool(passed), detail)
        self.checks.append(result)
        return result

    def skip(self, name: str, detail: str) -> CheckResult:
        result = CheckResult(name, True, detail, skipped=True)
        self.checks.append(result)
        return result

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def skipped(self) -> list[CheckResult]:
        return [c for c in self.checks if c.skipped]

    def __getitem__(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
