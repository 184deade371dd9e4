"""Machine-readable outcomes of cross-checks between independent methods."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonable(value: Any) -> Any:
    """Convert to JSON-safe data; integers and rationals become decimal strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


@dataclass
class Check:
    name: str
    methods: tuple
    params: dict
    expected: Any
    actual: Any
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "methods": list(self.methods),
            "params": jsonable(self.params),
            "passed": self.passed,
            "expected": jsonable(self.expected),
            "actual": jsonable(self.actual),
        }
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name, methods, params, expected, actual, passed=None, detail="") -> Check:
        if passed is None:
            passed = expected == actual
        check = Check(name, tuple(methods), dict(params), expected, actual, bool(passed), detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        first = self.first_failure
        return {
            "title": self.title,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "first_failure": None
            if first is None
            else {"name": first.name, "methods": list(first.methods), "params": jsonable(first.params)},
            "checks": [c.to_json() for c in self.checks],
        }

    def summary_lines(self) -> list:
        return [
            f"{'PASS' if c.passed else 'FAIL'}  {c.name}  [{' vs '.join(c.methods)}]  {_fmt_params(c.params)}"
            for c in self.checks
        ]


def _fmt_params(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items())
