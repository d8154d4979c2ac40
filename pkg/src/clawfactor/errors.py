"""Exception types shared across the toolkit."""

from __future__ import annotations


class ClawfactorError(Exception):
    """Base class for all toolkit errors."""


class GraphFormatError(ClawfactorError, ValueError):
    """Raised for malformed graph text or invalid graph data."""


class BudgetExceeded(ClawfactorError):
    """An exhaustive search ran past its node cap."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: node budget {budget} exceeded")
        self.what = what
        self.budget = budget


class NotClawFree(ClawfactorError):
    def __init__(self, claw: tuple[int, tuple[int, int, int]]):
        center, leaves = claw
        super().__init__(f"graph contains an induced claw at {center} with leaves {leaves}")
        self.claw = claw


class NotALineGraph(ClawfactorError):
    pass


class NoTriangleFreeRoot(ClawfactorError):
    pass


class NoTwoFactor(ClawfactorError):
    pass


class ReductionFailed(ClawfactorError):
    pass


class ClaimViolation(ClawfactorError):
    """A structural claim about an optimal system failed; carries an improving cycle."""

    def __init__(self, message: str, cycle):
        super().__init__(message)
        self.cycle = cycle


class HypothesesFail(ClawfactorError):
    def __init__(self, report, witness=None):
        super().__init__("degree hypotheses do not hold")
        self.report = report
        self.witness = witness


class Budget:
    """Mutable node counter handed through recursive searches."""

    __slots__ = ("limit", "used", "what")

    def __init__(self, limit: int | None, what: str = "search"):
        self.limit = limit
        self.used = 0
        self.what = what

    def tick(self, amount: int = 1) -> None:
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.what, self.limit)
