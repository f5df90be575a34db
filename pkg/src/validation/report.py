"""Pass/fail bookkeeping and the text report of the verification suites."""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any


def render(value: Any) -> Any:
    """JSON-friendly form of an instance field; rationals become "p/q"."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if hasattr(value, "to_list"):
        return value.to_list()
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


@dataclass
class CheckFailure:
    """The first instance on which an identity failed."""

    check: str
    instance: dict[str, Any]
    expected: str
    actual: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "instance": self.instance,
            "expected": self.expected,
            "actual": self.actual,
        }

    def summary(self) -> str:
        fields = ", ".join(f"{k}={v}" for k, v in self.instance.items())
        return (
            f"  FIRST COUNTEREXAMPLE [{self.check}]\n"
            f"    instance: {fields}\n"
            f"    expected: {self.expected}\n"
            f"    actual:   {self.actual}"
        )


@dataclass
class SuiteResult:
    """Counts for one named suite, broken down by check."""

    name: str
    counts: dict[str, list[int]] = field(default_factory=dict)
    """check name -> [passed, failed], in first-seen order."""

    first_failure: CheckFailure | None = None

    trials: int = 0
    """Random instances per standard configuration."""

    def _tally(self, check: str, ok: bool) -> None:
        passed_failed = self.counts.setdefault(check, [0, 0])
        passed_failed[0 if ok else 1] += 1

    def check_true(
        self, check: str, ok: bool, instance: dict[str, Any], detail: str = ""
    ) -> bool:
        """Record a boolean outcome; detail describes the violated relation."""
        self._tally(check, ok)
        if not ok and self.first_failure is None:
            self.first_failure = CheckFailure(
                check=check,
                instance={k: render(v) for k, v in instance.items()},
                expected=detail or "true",
                actual="false",
            )
        return ok

    def check_equal(
        self, check: str, expected: Any, actual: Any, instance: dict[str, Any]
    ) -> bool:
        """Record an exact equality."""
        ok = expected == actual
        self._tally(check, ok)
        if not ok and self.first_failure is None:
            self.first_failure = CheckFailure(
                check=check,
                instance={k: render(v) for k, v in instance.items()},
                expected=str(render(expected)),
                actual=str(render(actual)),
            )
        return ok

    @property
    def passed(self) -> int:
        return sum(p for p, _ in self.counts.values())

    @property
    def failed(self) -> int:
        return sum(f for _, f in self.counts.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "checks": {name: {"passed": p, "failed": f} for name, (p, f) in self.counts.items()},
            "first_failure": self.first_failure.to_dict() if self.first_failure else None,
        }

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [
            f"{self.name}: {status} ({self.passed} passed, {self.failed} failed; "
            f"{self.trials} instances per configuration)"
        ]
        for name, (p, f) in self.counts.items():
            lines.append(f"  {name}: {p} passed, {f} failed")
        if self.first_failure:
            lines.append(self.first_failure.summary())
        return "\n".join(lines)


@dataclass
class VerificationReport:
    """Results from a run of one or more suites."""

    seed: int
    results: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "ok": self.ok,
            "suites": [r.to_dict() for r in self.results],
        }

    def summary(self) -> str:
        """Deterministic text report; equal seeds give equal bytes."""
        lines = [
            "=" * 60,
            "IDENTITY VERIFICATION REPORT",
            "=" * 60,
            f"seed: {self.seed}",
            "",
        ]
        for result in self.results:
            lines.append(result.summary())
            lines.append("-" * 40)
        total_passed = sum(r.passed for r in self.results)
        total_failed = sum(r.failed for r in self.results)
        lines.append(
            f"TOTAL: {total_passed} passed, {total_failed} failed -> "
            f"{'ALL PASS' if self.ok else 'FAILURES'}"
        )
        return "\n".join(lines)


def save_report(report: VerificationReport, path: str | Path) -> None:
    """Save a verification report as JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(report.to_dict(), f, indent=2)
        f.write("\n")


def load_report(path: str | Path) -> dict:
    """Load a verification report from a JSON file."""
    with open(path, encoding="utf-8") as f:
        return json.load(f)
