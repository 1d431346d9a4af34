"""Machine-readable verification reports."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

SCHEMA = 1


@dataclass
class VerificationReport:
    theorem_id: str
    params: dict
    population: int = 0
    census: dict = field(default_factory=dict)
    out_of_scope: int = 0
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    wall_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def consistent(self) -> bool:
        """Census counts plus the out-of-scope count add up to the population."""
        return sum(self.census.values()) + self.out_of_scope == self.population

    def fail(self, what: Any) -> None:
        self.violations.append(what)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "theorem_id": self.theorem_id,
            "params": self.params,
            "population": self.population,
            "census": dict(sorted(self.census.items())),
            "out_of_scope": self.out_of_scope,
            "notes": self.notes,
            "violations": sorted(self.violations, key=lambda v: json.dumps(v, sort_keys=True)),
            "pass": self.passed,
        }
        if timing:
            out["wall_ms"] = round(self.wall_ms, 1)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        census = ", ".join(f"{k}={v}" for k, v in sorted(self.census.items()))
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        return (f"{status} {self.theorem_id} [{params}] population={self.population} "
                f"{census} violations={len(self.violations)} ({self.wall_ms:.0f} ms)")


@contextmanager
def timed(report: VerificationReport):
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.wall_ms = (time.perf_counter() - start) * 1000.0
