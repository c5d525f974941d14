"""Machine-readable verification records."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerifyReport:
    """Outcome of one check.

    ``witness`` is set on failure: the indices of the first failing case and
    the residual rendered as canonical text.  ``failures`` counts every
    failing case, not only the first.
    """

    check: str
    passed: bool
    witness: dict | None = None
    failures: int = 0
    detail: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"check": self.check, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
            out["failures"] = self.failures
        if self.detail:
            out["detail"] = self.detail
        return out

    def summary(self) -> str:
        if self.passed:
            return f"{self.check}: pass"
        w = self.witness or {}
        where = ",".join(str(x) for x in w.get("indices", []))
        return f"{self.check}: FAIL at ({where}) residual {w.get('residual', '?')}"
