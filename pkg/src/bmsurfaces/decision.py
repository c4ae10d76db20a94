from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Decision:
    """Answer of a decision procedure.

    ``witness`` backs a yes (a colouring, a matching, ...); ``reason`` explains
    a no.  ``details`` carries auxiliary counters that tests and reports use.
    """

    yes: bool
    witness: Any = None
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.yes

    @classmethod
    def no(cls, reason: str, **details) -> "Decision":
        return cls(False, None, reason, details)


class NoStructureError(ValueError):
    """Raised when asked to construct something whose existence was refuted."""

    def __init__(self, decision: Decision):
        super().__init__(decision.reason)
        self.decision = decision
