"""Pass/fail records shared by every verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: object = None

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", witness=None) -> Check:
        c = Check(name, bool(passed), detail, witness)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail, c.witness))
        for lab in other.labels:
            if lab not in self.labels:
                self.labels.append(lab)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        head = self.title + (f" [{', '.join(self.labels)}]" if self.labels else "")
        out = [head]
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            line = f"  {tag} {c.name}"
            if c.detail:
                line += f": {c.detail}"
            if not c.passed and c.witness is not None:
                line += f" | witness: {_plain(c.witness)}"
            out.append(line)
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "labels": list(self.labels),
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _plain(obj):
    """Witnesses may hold Poly objects or tuples; render them as JSON-able values."""
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return str(obj)
