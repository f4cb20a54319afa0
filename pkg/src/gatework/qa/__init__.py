from gatework.qa.checks import (
    check_spec_conformance,
    match_citations,
    parse_criterion,
    reconcile_totals,
    self_consistency,
)
from gatework.qa.offline import QAConfig, SourceDoc, offline_verify
from gatework.qa.report import (
    CheckKind,
    CheckReport,
    CheckStatus,
    FINDING_CODES,
    Finding,
    Severity,
    Verdict,
    VerdictOutcome,
)
from gatework.qa.tabular import TabularData

__all__ = [
    "CheckKind",
    "CheckReport",
    "CheckStatus",
    "FINDING_CODES",
    "Finding",
    "QAConfig",
    "Severity",
    "SourceDoc",
    "TabularData",
    "Verdict",
    "VerdictOutcome",
    "check_spec_conformance",
    "match_citations",
    "offline_verify",
    "parse_criterion",
    "reconcile_totals",
    "self_consistency",
]
