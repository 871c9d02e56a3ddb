"""Verifier reports with a stable JSON form.

Schema: ``{fixture, operation, hypotheses: [{name, status}],
claims: [{name, status, witness}]}`` where claim status is one of
``pass``, ``fail``, ``inapplicable`` or ``capped``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

STATUSES = ("pass", "fail", "inapplicable", "capped")


def _plain(x: Any) -> Any:
    """Coerce witnesses into JSON-safe values with a stable shape."""
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "to_json"):
        return _plain(x.to_json())
    return str(x)


@dataclass
class Claim:
    name: str
    status: str
    witness: Any = None

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": _plain(self.witness)}


@dataclass
class VerifierReport:
    fixture: str
    operation: str
    hypotheses: list[dict] = field(default_factory=list)
    claims: list[Claim] = field(default_factory=list)

    def hypothesis(self, name: str, holds: bool | None) -> bool:
        status = "capped" if holds is None else ("pass" if holds else "fail")
        self.hypotheses.append({"name": name, "status": status})
        return bool(holds)

    def claim(self, name: str, status: str, witness: Any = None) -> None:
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        self.claims.append(Claim(name, status, witness))

    def check(self, name: str, ok: bool, witness: Any = None) -> bool:
        self.claim(name, "pass" if ok else "fail", None if ok else witness)
        return ok

    def inapplicable(self, reason: str) -> None:
        self.claim("conclusion", "inapplicable", reason)

    @property
    def hypotheses_hold(self) -> bool:
        return all(h["status"] == "pass" for h in self.hypotheses)

    @property
    def status(self) -> str:
        """Overall verdict: any fail wins, then capped, then inapplicable."""
        states = {c.status for c in self.claims} | {
            "capped" for h in self.hypotheses if h["status"] == "capped"
        }
        for s in ("fail", "capped", "inapplicable"):
            if s in states:
                return s
        return "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def get(self, name: str) -> Claim:
        for c in self.claims:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "fixture": self.fixture,
            "operation": self.operation,
            "status": self.status,
            "hypotheses": list(self.hypotheses),
            "claims": [c.to_json() for c in self.claims],
        }
