"""Machine-readable run reports shared by the command-line front end.

Exit status is a pure function of the verdicts: 0 when every check with a
verdict passed, 1 otherwise.  Reports are deterministic for identical inputs
apart from the timing field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class CheckResult:
    name: str
    passed: Optional[bool]  # None marks an informational entry
    details: dict[str, Any] = field(default_factory=dict)


@dataclass
class RunReport:
    command: str
    checks: list[CheckResult] = field(default_factory=list)
    elapsed_s: float = 0.0

    def add(self, name: str, passed: Optional[bool], **details) -> None:
        self.checks.append(CheckResult(name, passed, details))

    def info(self, name: str, **details) -> None:
        self.checks.append(CheckResult(name, None, details))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.passed is not None)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "details": _plain(c.details)}
                for c in self.checks
            ],
            "elapsed_s": round(self.elapsed_s, 6),
        }
        return json.dumps(payload, indent=2, sort_keys=False)

    def render_text(self) -> str:
        lines = [f"command: {self.command}"]
        for c in self.checks:
            tag = "info" if c.passed is None else ("PASS" if c.passed else "FAIL")
            detail = "; ".join(f"{k}={_plain(v)}" for k, v in c.details.items())
            lines.append(f"[{tag}] {c.name}" + (f": {detail}" if detail else ""))
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        lines.append(f"elapsed: {self.elapsed_s:.3f}s")
        return "\n".join(lines)


def _plain(value):
    """Make details JSON-friendly and stable."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
