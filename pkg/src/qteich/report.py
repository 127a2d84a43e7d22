"""Machine-readable verification reports."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import __version__

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class Check:
    id: str
    anchor: str  # the identity being checked, in words
    status: str
    residual: float
    tolerance: float
    detail: str = ""
    # "<=": pass when residual <= tolerance; ">=": the residual is a lower-bounded quantity
    comparison: str = "<="


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    # observations that do not decide the verdict (e.g. a misprinted variant)
    findings: list[Check] = field(default_factory=list)
    inputs: dict[str, str] = field(default_factory=dict)  # name -> sha256
    parameters: dict[str, object] = field(default_factory=dict)
    version: str = __version__

    def add(self, id: str, anchor: str, residual: float, tolerance: float, detail: str = "") -> Check:
        ok = math.isfinite(residual) and residual <= tolerance
        c = Check(id, anchor, PASS if ok else FAIL, float(residual), float(tolerance), detail)
        self.checks.append(c)
        return c

    def add_at_least(self, id: str, anchor: str, value: float, minimum: float, detail: str = "") -> Check:
        ok = math.isfinite(value) and value >= minimum
        c = Check(id, anchor, PASS if ok else FAIL, float(value), float(minimum), detail, ">=")
        self.checks.append(c)
        return c

    def add_exact(self, id: str, anchor: str, ok: bool, detail: str = "") -> Check:
        """A symbolic check: residual 0 when exact, 1 otherwise."""
        c = Check(id, anchor, PASS if ok else FAIL, 0.0 if ok else 1.0, 0.0, detail)
        self.checks.append(c)
        return c

    def skip(self, id: str, anchor: str, reason: str) -> Check:
        c = Check(id, anchor, SKIP, 0.0, 0.0, reason)
        self.checks.append(c)
        return c

    def note(self, id: str, anchor: str, residual: float, tolerance: float, detail: str = "") -> Check:
        ok = math.isfinite(residual) and residual <= tolerance
        c = Check(id, anchor, PASS if ok else FAIL, float(residual), float(tolerance), detail)
        self.findings.append(c)
        return c

    def add_input(self, path: str | Path) -> None:
        data = Path(path).read_bytes()
        self.inputs[Path(path).name] = hashlib.sha256(data).hexdigest()

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(replace(c, id=prefix + c.id))
        for c in other.findings:
            self.findings.append(replace(c, id=prefix + c.id))
        self.inputs.update(other.inputs)

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_dict(self) -> dict[str, object]:
        return {
            "suite": self.suite,
            "version": self.version,
            "parameters": self.parameters,
            "inputs": dict(sorted(self.inputs.items())),
            "summary": self.counts(),
            "passed": self.passed,
            "checks": [asdict(c) for c in sorted(self.checks, key=lambda c: c.id)],
            "findings": [asdict(c) for c in sorted(self.findings, key=lambda c: c.id)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
