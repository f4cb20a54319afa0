"""QA report types and the finding-code registry.

Finding codes are a closed, documented set (see ``docs/qa-codes.md``);
constructing a Finding with an unknown code is a programming error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any


class CheckKind(str, Enum):
    SPEC_CONFORMANCE = "spec_conformance"
    UNIT_TOTAL_RECONCILIATION = "unit_total_reconciliation"
    CITATION_MATCH = "citation_match"
    SELF_CONSISTENCY = "self_consistency"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNCERTAIN = "uncertain"


class Severity(str, Enum):
    MINOR = "minor"
    MATERIAL = "material"


#: code -> description. Keep in sync with docs/qa-codes.md.
FINDING_CODES: dict[str, str] = {
    "spec.missing_file": "required file absent from the deliverable",
    "spec.row_count_short": "tabular output has fewer data rows than required",
    "spec.missing_column": "required column absent from every table",
    "spec.wrong_format": "no deliverable file has the required format",
    "spec.missing_total": "no table declares a total",
    "spec.unverifiable": "free-text criterion cannot be machine-checked",
    "table.sum_mismatch": "declared total differs from the sum of its constituents",
    "table.malformed": "table could not be parsed",
    "table.no_totals_declared": "table declares no totals to reconcile",
    "citation.unresolved": "source reference resolves to no attachment or recorded source",
    "citation.quote_missing": "cited span not found in the resolved source text",
    "citation.conflicting_sources": "the same claim is cited to sources that disagree about it",
    "consistency.low_agreement": "redundant runs disagree on the extracted answer",
    "consistency.moderate_agreement": "agreement between redundant runs is borderline",
    "consistency.single_sample": "only one sample available; consistency vacuously assumed",
}


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    severity: Severity
    location: tuple[str, str] | None = None  # (file, cell/line span)

    def __post_init__(self):
        if self.code not in FINDING_CODES:
            raise ValueError(f"unknown finding code {self.code!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "severity": self.severity.value,
            "location": list(self.location) if self.location else None,
        }


@dataclass(frozen=True)
class CheckReport:
    check_kind: CheckKind
    step_index: int
    status: CheckStatus
    findings: tuple[Finding, ...] = ()
    score: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "findings", tuple(self.findings))
        if self.status is CheckStatus.FAIL and not self.findings:
            raise ValueError("failing report must carry findings")
        if (self.score is not None) != (self.check_kind is CheckKind.SELF_CONSISTENCY):
            raise ValueError("score is present exactly for self-consistency reports")
        if self.score is not None and not (0 <= self.score <= 1):
            raise ValueError("score must lie in [0, 1]")

    @property
    def material_findings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.MATERIAL)

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_kind": self.check_kind.value,
            "step_index": self.step_index,
            "status": self.status.value,
            "findings": [f.to_dict() for f in self.findings],
            "score": None if self.score is None else [self.score.numerator, self.score.denominator],
        }


class VerdictOutcome(str, Enum):
    PASS = "pass"
    REWORK = "rework"
    ESCALATE_HUMAN_QA = "escalate_human_qa"


@dataclass(frozen=True)
class Verdict:
    outcome: VerdictOutcome
    reports: tuple[CheckReport, ...]
    confidence: float

    def __post_init__(self):
        object.__setattr__(self, "reports", tuple(self.reports))
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError("confidence must lie in [0, 1]")
        if self.outcome is VerdictOutcome.PASS:
            if any(r.material_findings for r in self.reports):
                raise ValueError("pass verdict cannot carry material findings")
            if self.confidence < 1.0:
                raise ValueError("pass verdict requires full confidence")

    def to_dict(self) -> dict[str, Any]:
        return {
            "outcome": self.outcome.value,
            "reports": [r.to_dict() for r in self.reports],
            "confidence": self.confidence,
        }
