"""Structured pass/fail results shared by every verification routine."""

import time
from dataclasses import dataclass, field

from .foundation import to_jsonable

SCHEMA_VERSION = 1


@dataclass
class VerificationReport:
    command: str
    parameters: dict = field(default_factory=dict)
    status: str = "pass"
    checks_run: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    max_failures: int = 50
    _t0: float = field(default_factory=time.perf_counter, repr=False)
    _failure_count: int = field(default=0, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def check(self, check_id, ok, inputs=None, expected=None, actual=None) -> bool:
        self.checks_run += 1
        if not ok:
            self.fail(check_id, inputs, expected, actual)
        return bool(ok)

    def fail(self, check_id, inputs=None, expected=None, actual=None):
        self._failure_count += 1
        self.status = "fail"
        if len(self.failures) < self.max_failures:
            self.failures.append({
                "check": str(check_id),
                "inputs": to_jsonable(inputs),
                "expected": to_jsonable(expected),
                "actual": to_jsonable(actual),
            })

    def error(self, message):
        self.status = "error"
        self.details["error"] = message

    @property
    def failure_count(self) -> int:
        return self._failure_count

    def absorb(self, other: "VerificationReport", prefix=None):
        """Merge another report's counts and failures into this one."""
        self.checks_run += other.checks_run
        for f in other.failures:
            f = dict(f)
            if prefix:
                f["check"] = f"{prefix}/{f['check']}"
            if len(self.failures) < self.max_failures:
                self.failures.append(f)
        self._failure_count += other.failure_count
        if other.status == "error":
            self.status = "error"
        elif other.status == "fail" and self.status == "pass":
            self.status = "fail"
        return self

    def finish(self):
        self.elapsed_ms = round((time.perf_counter() - self._t0) * 1000.0, 3)
        return self

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "parameters": to_jsonable(self.parameters),
            "status": self.status,
            "checks_run": self.checks_run,
            "failure_count": self.failure_count,
            "failures": sorted(self.failures, key=lambda f: f["check"]),
            "details": to_jsonable(self.details),
            "elapsed_ms": self.elapsed_ms,
        }

    def summary(self) -> str:
        line = f"{self.command}: {self.status.upper()} ({self.checks_run} checks"
        if self.failure_count:
            line += f", {self.failure_count} failures"
        return line + ")"
