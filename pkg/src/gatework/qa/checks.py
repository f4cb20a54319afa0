"""Online QA detectors.

Four checks run continuously during execution: spec conformance against the
brief's acceptance criteria, unit/total reconciliation of tabular output,
citation matching against resolvable sources, and self-consistency across
redundant runs. Checks report, they never throw on bad deliverables;
exceptions are reserved for caller errors (malformed table handed directly,
too few samples).
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from gatework.core.types import AttachmentRef, Deliverable
from gatework.errors import TooFewSamples
from gatework.qa.report import CheckKind, CheckReport, CheckStatus, Finding, Severity
from gatework.qa.tabular import TabularData, is_total_label, parse_number

# Relative tolerance for real-valued totals; integer totals must match exactly.
REAL_TOLERANCE = 1e-6

SELF_CONSISTENCY_PASS = Fraction(7, 10)
SELF_CONSISTENCY_UNCERTAIN = Fraction(1, 2)


def normalize_text(text: str) -> str:
    """NFC, casefold, collapse whitespace: the match key for citations."""
    text = unicodedata.normalize("NFC", text).casefold()
    return re.sub(r"\s+", " ", text).strip()


# --- acceptance criteria --------------------------------------------------

_CRITERION_PATTERNS: list[tuple[str, re.Pattern[str]]] = [
    ("has_file", re.compile(r"^has_file\s*[:(]\s*[\"']?([^\"')]+?)[\"']?\s*\)?$")),
    ("row_count", re.compile(r"^row_count\s*(?:>=|≥)\s*(\d+)$")),
    ("column_present", re.compile(r"^column_present\s*[:(]\s*[\"']?([^\"')]+?)[\"']?\s*\)?$")),
    ("format_is", re.compile(r"^format_is\s*[:(]\s*[\"']?\.?([^\"')]+?)[\"']?\s*\)?$")),
    ("total_declared", re.compile(r"^total_declared$")),
]


@dataclass(frozen=True)
class ParsedCriterion:
    tag: str
    arg: str
    raw: str


def parse_criterion(text: str) -> ParsedCriterion | None:
    """Machine-checkable criterion, or None for free text."""
    stripped = text.strip()
    for tag, pattern in _CRITERION_PATTERNS:
        m = pattern.match(stripped)
        if m:
            arg = m.group(1) if m.groups() else ""
            return ParsedCriterion(tag=tag, arg=arg.strip(), raw=text)
    return None


def _criterion_violation(
    crit: ParsedCriterion,
    deliverable: Deliverable,
    tables: Sequence[TabularData],
) -> Finding | None:
    names = [f.name for f in deliverable.files]
    if crit.tag == "has_file":
        want = crit.arg.casefold()
        if not any(want in n.casefold() for n in names):
            return Finding("spec.missing_file", f"no deliverable file matching {crit.arg!r}", Severity.MATERIAL)
    elif crit.tag == "row_count":
        need = int(crit.arg)
        have = max((len(t.data_rows()) for t in tables), default=0)
        if have < need:
            return Finding(
                "spec.row_count_short",
                f"required at least {need} data rows, found {have}",
                Severity.MATERIAL,
            )
    elif crit.tag == "column_present":
        want = crit.arg.casefold()
        if not any(want == h.strip().casefold() for t in tables for h in t.header):
            return Finding("spec.missing_column", f"no table has a column {crit.arg!r}", Severity.MATERIAL)
    elif crit.tag == "format_is":
        suffix = "." + crit.arg.lstrip(".").casefold()
        if not any(n.casefold().endswith(suffix) for n in names):
            return Finding("spec.wrong_format", f"no deliverable file with format {crit.arg!r}", Severity.MATERIAL)
    elif crit.tag == "total_declared":
        if not any(t.declares_totals() for t in tables):
            return Finding("spec.missing_total", "no table declares a total", Severity.MATERIAL)
    return None


def check_spec_conformance(
    deliverable: Deliverable,
    criteria: Sequence[str],
    tables: Sequence[TabularData] = (),
) -> CheckReport:
    """Evaluate machine-checkable criteria; free-text ones leave the report uncertain.

    fail  iff any machine-checkable criterion is violated;
    uncertain iff nothing is violated but free-text criteria remain unchecked;
    pass  otherwise (including the vacuous no-criteria case).
    """
    findings: list[Finding] = []
    unverifiable: list[str] = []
    for raw in criteria:
        parsed = parse_criterion(raw)
        if parsed is None:
            unverifiable.append(raw)
            continue
        violation = _criterion_violation(parsed, deliverable, tables)
        if violation is not None:
            findings.append(violation)

    if findings:
        status = CheckStatus.FAIL
    elif unverifiable:
        status = CheckStatus.UNCERTAIN
        findings = [
            Finding("spec.unverifiable", f"cannot machine-check: {text}", Severity.MINOR) for text in unverifiable
        ]
    else:
        status = CheckStatus.PASS
    return CheckReport(
        check_kind=CheckKind.SPEC_CONFORMANCE,
        step_index=deliverable.step_index,
        status=status,
        findings=tuple(findings),
    )


# --- unit/total reconciliation --------------------------------------------


def _numbers_match(expected: float, declared: int | float, all_int: bool) -> bool:
    if all_int and isinstance(declared, int):
        return int(expected) == declared
    return abs(expected - declared) <= REAL_TOLERANCE * max(1.0, abs(declared))


def reconcile_totals(table: TabularData, step_index: int = -1) -> CheckReport:
    """Check every declared total against the sum of its constituents.

    Integer totals must match exactly; real totals within relative 1e-6.
    Row totals own the contiguous block above them back to the previous
    total row; a TOTAL column owns the other numeric cells of its row.
    """
    findings: list[Finding] = []
    total_cols = set(table.total_column_indexes())

    block_start = 0
    for r, row in enumerate(table.rows):
        if not is_total_label(row[0]):
            continue
        constituents = [table.rows[k] for k in range(block_start, r)]
        for j in range(1, len(table.header)):
            if j in total_cols:
                continue
            declared = parse_number(row[j])
            if declared is None:
                continue
            values = [parse_number(c[j]) for c in constituents]
            numeric = [v for v in values if v is not None]
            all_int = isinstance(declared, int) and all(isinstance(v, int) for v in numeric)
            expected = sum(numeric)
            if not _numbers_match(expected, declared, all_int):
                findings.append(
                    Finding(
                        "table.sum_mismatch",
                        f"column {table.header[j]!r}: declared total {declared}, "
                        f"constituents sum to {expected} (discrepancy {declared - expected})",
                        Severity.MATERIAL,
                        location=(table.name, f"row {r + 1}, col {j}"),
                    )
                )
        block_start = r + 1

    for j in total_cols:
        for r, row in enumerate(table.rows):
            if is_total_label(row[0]):
                continue
            declared = parse_number(row[j])
            if declared is None:
                continue
            numeric = [
                v
                for k, cell in enumerate(row)
                if k != j and k not in total_cols and (v := parse_number(cell)) is not None
            ]
            all_int = isinstance(declared, int) and all(isinstance(v, int) for v in numeric)
            expected = sum(numeric)
            if not _numbers_match(expected, declared, all_int):
                findings.append(
                    Finding(
                        "table.sum_mismatch",
                        f"row {r + 1}: declared row total {declared}, cells sum to {expected}",
                        Severity.MATERIAL,
                        location=(table.name, f"row {r + 1}, col {j}"),
                    )
                )

    if findings:
        status = CheckStatus.FAIL
    elif not table.declares_totals():
        status = CheckStatus.PASS
        findings = [Finding("table.no_totals_declared", "nothing to reconcile", Severity.MINOR)]
    else:
        status = CheckStatus.PASS
    return CheckReport(
        check_kind=CheckKind.UNIT_TOTAL_RECONCILIATION,
        step_index=step_index,
        status=status,
        findings=tuple(findings),
    )


# --- citation matching ------------------------------------------------------


@dataclass(frozen=True)
class SourceDoc:
    """An attachment or recorded external source with its retrievable text."""

    ref: AttachmentRef
    text: str


def _resolve_source(source_ref: str, sources: Sequence[SourceDoc]) -> SourceDoc | None:
    key = source_ref.strip().casefold()
    for doc in sources:
        if key in (doc.ref.name.casefold(), doc.ref.uri.casefold(), doc.ref.content_hash.casefold()):
            return doc
    return None


def match_citations(deliverable: Deliverable, sources: Sequence[SourceDoc]) -> CheckReport:
    """Flag fabricated references, missing quotes, and source disagreement.

    When the same claim is cited to several sources and only some of them
    actually contain it, the sources conflict about the claim; that gets
    its own finding so the loop can escalate on it.
    """
    findings: list[Finding] = []
    claim_hits: dict[str, list[bool]] = {}
    for idx, citation in enumerate(deliverable.citations):
        doc = _resolve_source(citation.source_ref, sources)
        if doc is None:
            findings.append(
                Finding(
                    "citation.unresolved",
                    f"citation {idx}: source {citation.source_ref!r} resolves to no attachment or recorded source",
                    Severity.MATERIAL,
                    location=(citation.source_ref, f"citation {idx}"),
                )
            )
            continue
        claim = normalize_text(citation.claim_span)
        found = claim in normalize_text(doc.text)
        claim_hits.setdefault(claim, []).append(found)
        if not found:
            findings.append(
                Finding(
                    "citation.quote_missing",
                    f"citation {idx}: cited span not found in {citation.source_ref!r}",
                    Severity.MATERIAL,
                    location=(doc.ref.name, f"citation {idx}"),
                )
            )
    for claim, hits in claim_hits.items():
        if len(hits) >= 2 and any(hits) and not all(hits):
            findings.append(
                Finding(
                    "citation.conflicting_sources",
                    f"claim {claim[:60]!r} is supported by some cited sources but not others",
                    Severity.MATERIAL,
                )
            )
    return CheckReport(
        check_kind=CheckKind.CITATION_MATCH,
        step_index=deliverable.step_index,
        status=CheckStatus.FAIL if findings else CheckStatus.PASS,
        findings=tuple(findings),
    )


# --- self-consistency -------------------------------------------------------


def _extract_number(text: str) -> str:
    m = re.search(r"[+-]?\d+(?:\.\d+)?", text)
    return repr(float(m.group())) if m else ""


def _extract_first_line(text: str) -> str:
    for line in text.splitlines():
        if line.strip():
            return normalize_text(line)
    return ""


EXTRACTORS: dict[str, Callable[[str], str]] = {
    "exact": normalize_text,
    "number": _extract_number,
    "first_line": _extract_first_line,
}


def self_consistency(samples: Sequence[str], key: str = "exact", step_index: int = -1) -> CheckReport:
    """Modal-agreement score over k redundant runs.

    score = (count of modal extracted answer) / k, an exact rational.
    pass at >= 0.7, uncertain in [0.5, 0.7), fail below.
    """
    if len(samples) < 2:
        raise TooFewSamples(f"need at least 2 samples, got {len(samples)}")
    if key not in EXTRACTORS:
        raise ValueError(f"unknown extraction key {key!r}")
    extractor = EXTRACTORS[key]
    extracted = [extractor(s) for s in samples]
    modal_count = Counter(extracted).most_common(1)[0][1]
    score = Fraction(modal_count, len(samples))

    if score >= SELF_CONSISTENCY_PASS:
        status, findings = CheckStatus.PASS, ()
    elif score >= SELF_CONSISTENCY_UNCERTAIN:
        status = CheckStatus.UNCERTAIN
        findings = (
            Finding(
                "consistency.moderate_agreement",
                f"modal answer covers {modal_count}/{len(samples)} runs",
                Severity.MINOR,
            ),
        )
    else:
        status = CheckStatus.FAIL
        findings = (
            Finding(
                "consistency.low_agreement",
                f"modal answer covers only {modal_count}/{len(samples)} runs",
                Severity.MATERIAL,
            ),
        )
    return CheckReport(
        check_kind=CheckKind.SELF_CONSISTENCY,
        step_index=step_index,
        status=status,
        findings=findings,
        score=score,
    )
