"""Node/time budgets shared by the exact solvers."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SearchBudget:
    """Limits for a branch-and-bound run; None means unlimited."""

    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None

    def start(self) -> "BudgetClock":
        return BudgetClock(self)


class BudgetClock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.t0 = time.monotonic()

    def exhausted(self, nodes: int) -> bool:
        b = self.budget
        if b.max_nodes is not None and nodes >= b.max_nodes:
            return True
        if b.max_seconds is not None and time.monotonic() - self.t0 >= b.max_seconds:
            return True
        return False

    def elapsed(self) -> float:
        return time.monotonic() - self.t0
