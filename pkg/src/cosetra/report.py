from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Failure:
    condition: str
    where: tuple
    witness: str

    def to_record(self) -> dict[str, Any]:
        return {"condition": self.condition, "where": list(self.where), "witness": self.witness}


@dataclass
class ConditionReport:
    """Pass/fail verdict with witnesses.  ``info`` holds non-failing notes."""

    failures: list[Failure] = field(default_factory=list)
    info: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, condition: str, where: tuple, witness: str) -> None:
        self.failures.append(Failure(condition, tuple(where), witness))

    def note(self, condition: str, where: tuple, witness: str) -> None:
        self.info.append(Failure(condition, tuple(where), witness))

    def extend(self, other: ConditionReport) -> ConditionReport:
        self.failures.extend(other.failures)
        self.info.extend(other.info)
        return self

    def conditions(self) -> set[str]:
        return {f.condition for f in self.failures}

    def to_record(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "failures": [f.to_record() for f in self.failures],
            "info": [f.to_record() for f in self.info],
        }

    def __str__(self) -> str:
        if self.ok:
            head = "ok"
        else:
            head = f"{len(self.failures)} failure(s)"
        lines = [head]
        lines += [f"  FAIL {f.condition} at {f.where}: {f.witness}" for f in self.failures]
        lines += [f"  note {f.condition} at {f.where}: {f.witness}" for f in self.info]
        return "\n".join(lines)
