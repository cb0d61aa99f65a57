from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class PassReport:
    name: str
    gates_before: int
    gates_after: int
    details: dict = field(default_factory=dict)

    @property
    def delta(self) -> int:
        return self.gates_after - self.gates_before
