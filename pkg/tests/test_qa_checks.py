"""Detector tests: spec conformance, reconciliation, citations, self-consistency."""

from __future__ import annotations

from fractions import Fraction

import pytest

from gatework.core.types import Actor, AttachmentRef, Citation, Deliverable, MediaKind
from gatework.errors import MalformedTable, TooFewSamples
from gatework.qa import (
    CheckStatus,
    TabularData,
    check_spec_conformance,
    match_citations,
    parse_criterion,
    reconcile_totals,
    self_consistency,
)
from gatework.qa.checks import SourceDoc


def make_deliverable(file_names=("report.csv",), citations=(), summary="done") -> Deliverable:
    files = tuple(
        AttachmentRef(name=n, media_kind=MediaKind.SPREADSHEET, content_hash=f"h{i}", uri=n)
        for i, n in enumerate(file_names)
    )
    return Deliverable(files=files, summary=summary, citations=tuple(citations), produced_by=Actor.AI_WORKER, step_index=0)


def table(*lines: str, name="t.csv") -> TabularData:
    return TabularData.from_csv("\n".join(lines), name=name)


# --- criterion parsing ---------------------------------------------------


@pytest.mark.parametrize(
    "raw,tag,arg",
    [
        ("has_file:report", "has_file", "report"),
        ('has_file("report")', "has_file", "report"),
        ("row_count>=10", "row_count", "10"),
        ("row_count≥10", "row_count", "10"),
        ("column_present:email", "column_present", "email"),
        ("format_is:csv", "format_is", "csv"),
        ("total_declared", "total_declared", ""),
    ],
)
def test_parse_criterion_tags(raw, tag, arg):
    parsed = parse_criterion(raw)
    assert parsed is not None
    assert (parsed.tag, parsed.arg) == (tag, arg)


def test_parse_criterion_free_text():
    assert parse_criterion("Sources must be less than a year old") is None


# --- spec conformance -----------------------------------------------------


def test_conformance_pass():
    t = table("name,count", "a,3", "b,4", *[f"r{i},1" for i in range(8)])
    report = check_spec_conformance(make_deliverable(), ["has_file:report", "row_count>=10"], tables=[t])
    assert report.status is CheckStatus.PASS
    assert not report.findings


def test_conformance_row_count_violation():
    t = table("name,count", *[f"r{i},1" for i in range(7)])
    report = check_spec_conformance(make_deliverable(), ["row_count>=10"], tables=[t])
    assert report.status is CheckStatus.FAIL
    assert [f.code for f in report.material_findings] == ["spec.row_count_short"]


def test_conformance_only_free_text_is_uncertain():
    report = check_spec_conformance(make_deliverable(), ["Tone should be friendly", "Cover all regions"])
    assert report.status is CheckStatus.UNCERTAIN
    assert all(f.code == "spec.unverifiable" for f in report.findings)
    assert not report.material_findings


def test_conformance_no_criteria_is_vacuous_pass():
    assert check_spec_conformance(make_deliverable(), []).status is CheckStatus.PASS


def test_conformance_mixed_checkable_and_free_text():
    report = check_spec_conformance(
        make_deliverable(file_names=("notes.md",)),
        ["has_file:report", "Keep it short"],
    )
    # violation dominates: fail, not uncertain
    assert report.status is CheckStatus.FAIL
    assert [f.code for f in report.material_findings] == ["spec.missing_file"]


def test_conformance_format_and_column():
    t = table("email,name", "a@b.c,A")
    report = check_spec_conformance(
        make_deliverable(file_names=("out.csv",)),
        ["format_is:csv", "column_present:email", "total_declared"],
        tables=[t],
    )
    assert report.status is CheckStatus.FAIL
    assert [f.code for f in report.material_findings] == ["spec.missing_total"]


# --- reconcile_totals ------------------------------------------------------


def test_reconcile_pass_integers():
    report = reconcile_totals(table("item,count", "a,2", "b,3", "c,5", "TOTAL,10"))
    assert report.status is CheckStatus.PASS
    assert not report.material_findings


def test_reconcile_integer_discrepancy():
    report = reconcile_totals(table("item,count", "a,2", "b,3", "c,5", "TOTAL,11"))
    assert report.status is CheckStatus.FAIL
    assert [f.code for f in report.findings] == ["table.sum_mismatch"]
    assert "discrepancy 1" in report.findings[0].message


def test_reconcile_real_tolerance():
    report = reconcile_totals(table("item,amount", "a,0.1", "b,0.2", "TOTAL,0.3"))
    assert report.status is CheckStatus.PASS


def test_reconcile_real_out_of_tolerance():
    report = reconcile_totals(table("item,amount", "a,0.1", "b,0.2", "TOTAL,0.31"))
    assert report.status is CheckStatus.FAIL


def test_reconcile_multiple_blocks():
    report = reconcile_totals(
        table("item,count", "a,1", "b,2", "TOTAL,3", "c,10", "d,20", "TOTAL,31")
    )
    assert report.status is CheckStatus.FAIL
    assert len(report.findings) == 1
    assert report.findings[0].location == ("t.csv", "row 6, col 1")


def test_reconcile_total_column():
    ok = reconcile_totals(table("name,q1,q2,TOTAL", "a,1,2,3", "b,5,5,10"))
    assert ok.status is CheckStatus.PASS
    bad = reconcile_totals(table("name,q1,q2,TOTAL", "a,1,2,4"))
    assert bad.status is CheckStatus.FAIL


def test_reconcile_row_permutation_invariant():
    rows = ["a,4", "b,9", "c,7"]
    for declared, expected in ((20, CheckStatus.PASS), (21, CheckStatus.FAIL)):
        statuses = {
            reconcile_totals(table("item,count", *(rows[i] for i in perm), f"TOTAL,{declared}")).status
            for perm in ([0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0])
        }
        assert statuses == {expected}


def test_reconcile_no_totals_is_minor_note():
    report = reconcile_totals(table("item,count", "a,1"))
    assert report.status is CheckStatus.PASS
    assert [f.code for f in report.findings] == ["table.no_totals_declared"]


def test_malformed_table_raises():
    with pytest.raises(MalformedTable):
        TabularData.from_csv("")
    with pytest.raises(MalformedTable):
        TabularData(header=("a", "b"), rows=(("1",),))


# --- citation matching -----------------------------------------------------


def source(name: str, text: str) -> SourceDoc:
    return SourceDoc(
        ref=AttachmentRef(name=name, media_kind=MediaKind.DOCUMENT, content_hash=name, uri=name),
        text=text,
    )


def test_citation_resolves_and_quote_found():
    d = make_deliverable(citations=[Citation("revenue grew 12 percent", "notes.md")])
    report = match_citations(d, [source("notes.md", "In 2024, Revenue   grew 12 PERCENT overall.")])
    assert report.status is CheckStatus.PASS


def test_citation_unresolved_source_is_fabrication():
    d = make_deliverable(citations=[Citation("anything", "nonexistent.pdf")])
    report = match_citations(d, [source("notes.md", "text")])
    assert report.status is CheckStatus.FAIL
    assert [f.code for f in report.findings] == ["citation.unresolved"]


def test_citation_quote_absent_from_source():
    d = make_deliverable(citations=[Citation("profits doubled", "notes.md")])
    report = match_citations(d, [source("notes.md", "Revenue grew 12 percent.")])
    assert report.status is CheckStatus.FAIL
    assert [f.code for f in report.findings] == ["citation.quote_missing"]


def test_citation_empty_list_passes():
    assert match_citations(make_deliverable(), []).status is CheckStatus.PASS


# --- self-consistency -------------------------------------------------------


def test_self_consistency_unanimous():
    report = self_consistency(["A", "A", "A"])
    assert report.status is CheckStatus.PASS
    assert report.score == Fraction(1)


def test_self_consistency_two_of_three():
    report = self_consistency(["A", "A", "B"])
    assert report.status is CheckStatus.UNCERTAIN
    assert report.score == Fraction(2, 3)


def test_self_consistency_all_disagree():
    report = self_consistency(["A", "B", "C"])
    assert report.status is CheckStatus.FAIL
    assert report.score == Fraction(1, 3)
    assert report.material_findings


def test_self_consistency_scores_are_exact_rationals():
    for k in range(2, 8):
        for agree in range(1, k + 1):
            samples = ["same"] * agree + [f"diff-{i}" for i in range(k - agree)]
            report = self_consistency(samples)
            assert report.score == Fraction(max(agree, 1), k)


def test_self_consistency_repeated_sample_scores_one():
    for k in (2, 3, 5, 9):
        assert self_consistency(["x"] * k).score == Fraction(1)


def test_self_consistency_number_extraction():
    report = self_consistency(["The answer is 42.", "42 units", "total: 42"], key="number")
    assert report.status is CheckStatus.PASS


def test_self_consistency_too_few_samples():
    with pytest.raises(TooFewSamples):
        self_consistency(["only one"])
