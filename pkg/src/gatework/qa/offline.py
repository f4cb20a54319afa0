"""Offline verification: the pre-delivery multi-step QA pass.

Runs the four detectors in a fixed order (spec conformance, reconciliation,
citations, self-consistency) so report ordering is deterministic, then
folds them into a single verdict:

- pass              no material findings and no uncertain reports
- rework            at least one material finding
- escalate_human_qa clean of material findings but something stayed uncertain

confidence = 1 - (uncertain reports / total reports); a pass requires 1.0,
so any residual uncertainty blocks the handoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gatework.content import ContentStore
from gatework.core.log import AuditLog
from gatework.core.types import Deliverable, EventKind, MediaKind, TaskBrief
from gatework.errors import MalformedTable
from gatework.qa.checks import SourceDoc, check_spec_conformance, match_citations, reconcile_totals, self_consistency
from gatework.qa.report import CheckKind, CheckReport, CheckStatus, Finding, Severity, Verdict, VerdictOutcome
from gatework.qa.tabular import TabularData


@dataclass(frozen=True)
class QAConfig:
    consistency_key: str = "exact"
    #: payload field of step_completed events that carries redundant-run outputs
    samples_field: str = "consistency_samples"


DEFAULT_QA_CONFIG = QAConfig()


def _load_tables(deliverable: Deliverable, store: ContentStore | None) -> tuple[list[TabularData], list[Finding]]:
    tables: list[TabularData] = []
    problems: list[Finding] = []
    if store is None:
        return tables, problems
    for ref in deliverable.files:
        if ref.media_kind is not MediaKind.SPREADSHEET and not ref.name.casefold().endswith(".csv"):
            continue
        text = store.get_text(ref)
        if text is None:
            continue
        try:
            tables.append(TabularData.from_csv(text, name=ref.name))
        except MalformedTable as exc:
            problems.append(Finding("table.malformed", f"{ref.name}: {exc}", Severity.MATERIAL, (ref.name, "")))
    return tables, problems


def _reconciliation_report(
    tables: Sequence[TabularData], parse_problems: Sequence[Finding], step_index: int
) -> CheckReport:
    findings = list(parse_problems)
    for table in tables:
        findings.extend(reconcile_totals(table, step_index=step_index).material_findings)
    return CheckReport(
        check_kind=CheckKind.UNIT_TOTAL_RECONCILIATION,
        step_index=step_index,
        status=CheckStatus.FAIL if findings else CheckStatus.PASS,
        findings=tuple(findings),
    )


def _history_samples(history: AuditLog, field: str, step_index: int) -> list[str]:
    """Samples recorded by the step's most recent completion.

    A later completion without samples supersedes earlier ones: samples of
    a discarded attempt must not leak into the verdict.
    """
    samples: list[str] = []
    for event in history:
        if event.kind is EventKind.STEP_COMPLETED and event.payload.get("step_index") == step_index:
            recorded = event.payload.get(field)
            samples = [str(s) for s in recorded] if isinstance(recorded, (list, tuple)) else []
    return samples


def _consistency_report(samples: Sequence[str], key: str, step_index: int) -> CheckReport:
    if len(samples) >= 2:
        return self_consistency(samples, key=key, step_index=step_index)
    # One deterministic artifact carries no disagreement signal; note it and move on.
    return CheckReport(
        check_kind=CheckKind.SELF_CONSISTENCY,
        step_index=step_index,
        status=CheckStatus.PASS,
        findings=(
            Finding("consistency.single_sample", f"{len(samples)} sample(s) recorded", Severity.MINOR),
        ),
        score=Fraction(1),
    )


def gather_sources(
    brief: TaskBrief, store: ContentStore | None, extra_sources: Sequence[SourceDoc] = ()
) -> list[SourceDoc]:
    """Brief attachments (with retrievable text) plus recorded external sources."""
    sources = list(extra_sources)
    if store is not None:
        for ref in brief.attachments:
            text = store.get_text(ref)
            if text is not None:
                sources.append(SourceDoc(ref=ref, text=text))
    return sources


def offline_verify(
    brief: TaskBrief,
    deliverable: Deliverable,
    history: AuditLog,
    store: ContentStore | None = None,
    extra_sources: Sequence[SourceDoc] = (),
    consistency_samples: Sequence[str] | None = None,
    config: QAConfig = DEFAULT_QA_CONFIG,
) -> Verdict:
    """Run all four checks against the final deliverable and fold the verdict."""
    step_index = deliverable.step_index
    tables, parse_problems = _load_tables(deliverable, store)

    reports = [
        check_spec_conformance(deliverable, brief.acceptance_criteria, tables=tables),
        _reconciliation_report(tables, parse_problems, step_index),
        match_citations(deliverable, gather_sources(brief, store, extra_sources)),
        _consistency_report(
            consistency_samples
            if consistency_samples is not None
            else _history_samples(history, config.samples_field, step_index),
            config.consistency_key,
            step_index,
        ),
    ]

    material = sum(len(r.material_findings) for r in reports)
    uncertain = sum(1 for r in reports if r.status is CheckStatus.UNCERTAIN)
    confidence = 1.0 - uncertain / len(reports)
    if material:
        outcome = VerdictOutcome.REWORK
    elif uncertain:
        outcome = VerdictOutcome.ESCALATE_HUMAN_QA
    else:
        outcome = VerdictOutcome.PASS
    return Verdict(outcome=outcome, reports=tuple(reports), confidence=confidence)
