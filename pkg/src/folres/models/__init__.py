"""Report and verification models."""

from folres.models.report import (
    SCHEMA_VERSION,
    AdmissibilityRecord,
    EdgeRecord,
    FiberCheckRecord,
    InvariantsRecord,
    NodeRecord,
    PreparedRecord,
    ProblemSummary,
    Report,
    StageRecord,
)
from folres.models.verification import VerificationIssue, VerificationLevel, VerificationReport

__all__ = [
    "SCHEMA_VERSION",
    "AdmissibilityRecord",
    "EdgeRecord",
    "FiberCheckRecord",
    "InvariantsRecord",
    "NodeRecord",
    "PreparedRecord",
    "ProblemSummary",
    "Report",
    "StageRecord",
    "VerificationIssue",
    "VerificationLevel",
    "VerificationReport",
]
