from typing import Literal

from pydantic import BaseModel, Field

VerificationLevel = Literal["PASS", "FAIL", "WARN", "INFO"]
VerificationCategory = Literal["leaf", "edge", "fiber", "tree"]


class VerificationIssue(BaseModel):
    """A single finding of a tree verification."""

    level: VerificationLevel = Field(..., description="Severity of the issue.")
    chart: str = Field(..., description="Chart id of the node or edge child concerned.")
    message: str = Field(..., description="A human-readable description of the issue.")
    category: VerificationCategory | None = Field(default=None, description="Which family of checks produced it.")


class VerificationReport(BaseModel):
    """The result of verifying one chart tree."""

    root: str
    is_valid: bool = True
    leaves: int = 0
    edges_checked: int = 0
    fiber_checks: int = 0
    issues: list[VerificationIssue] = Field(default_factory=list)

    def add(
        self, level: VerificationLevel, chart: str, message: str, category: VerificationCategory | None = None
    ) -> None:
        """Helper to add an issue and update validity."""
        self.issues.append(VerificationIssue(level=level, chart=chart, message=message, category=category))
        if level == "FAIL":
            self.is_valid = False

    @property
    def first_failure(self) -> VerificationIssue | None:
        return next((i for i in self.issues if i.level == "FAIL"), None)

    def count(self, level: VerificationLevel) -> int:
        return sum(1 for i in self.issues if i.level == level)
