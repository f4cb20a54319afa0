"""Seeded-fault corpus for detector testing.

Each case is a (clean, faulty, fault-manifest) triple: two self-contained
deliverable bundles (file contents inlined) plus a manifest listing the
injected faults by finding code and location. The faulty twin differs from
the clean one only by its injected faults: broken declared totals and
fabricated citations (unresolvable source refs or quotes absent from the
cited source). A sound detector set flags every injected fault as material
and reports zero material findings on the clean twin.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from gatework.content import ContentStore
from gatework.core.types import Actor, Citation, Deliverable, MediaKind
from gatework.qa.checks import SourceDoc, match_citations, reconcile_totals
from gatework.qa.report import Finding
from gatework.qa.tabular import TabularData

DEFAULT_CORPUS_SEED = 90817
DEFAULT_CORPUS_SIZE = 20

_SECTORS = ["logistics", "fintech", "retail", "energy", "health", "media", "travel", "legal"]
_CITIES = ["Berlin", "Austin", "Lyon", "Osaka", "Porto", "Tallinn", "Denver", "Leeds"]
_METRICS = ["headcount", "offices", "deals"]


@dataclass(frozen=True)
class Bundle:
    """A deliverable plus everything needed to check it, fully inlined."""

    task_id: str
    summary: str
    files: tuple[dict[str, str], ...]  # name, media_kind, content
    citations: tuple[Citation, ...]
    sources: tuple[dict[str, str], ...]  # name, media_kind, content

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "summary": self.summary,
            "files": list(self.files),
            "citations": [c.to_dict() for c in self.citations],
            "sources": list(self.sources),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Bundle":
        return cls(
            task_id=d["task_id"],
            summary=d["summary"],
            files=tuple(d["files"]),
            citations=tuple(Citation.from_dict(c) for c in d["citations"]),
            sources=tuple(d["sources"]),
        )

    def materialize(self) -> tuple[Deliverable, ContentStore, list[SourceDoc]]:
        store = ContentStore()
        refs = [
            store.put_text(f["name"], MediaKind(f["media_kind"]), f["content"]) for f in self.files
        ]
        sources = [
            SourceDoc(
                ref=store.put_text(s["name"], MediaKind(s["media_kind"]), s["content"]),
                text=s["content"],
            )
            for s in self.sources
        ]
        deliverable = Deliverable(
            files=tuple(refs),
            summary=self.summary,
            citations=self.citations,
            produced_by=Actor.AI_WORKER,
            step_index=0,
        )
        return deliverable, store, sources


def run_detectors(bundle: Bundle) -> list[Finding]:
    """Material findings from reconciliation and citation matching."""
    deliverable, store, sources = bundle.materialize()
    findings: list[Finding] = []
    for ref in deliverable.files:
        if ref.media_kind is MediaKind.SPREADSHEET:
            table = TabularData.from_csv(store.get_text(ref) or "", name=ref.name)
            findings.extend(reconcile_totals(table).material_findings)
    findings.extend(match_citations(deliverable, sources).material_findings)
    return findings


def _make_clean_case(case_id: str, rng: random.Random) -> Bundle:
    n_groups = rng.randint(1, 2)
    metric = rng.choice(_METRICS)
    lines = [f"company,{metric},revenue_musd"]
    for _ in range(n_groups):
        block = []
        for _ in range(rng.randint(3, 5)):
            name = f"{rng.choice(_SECTORS)}-{rng.choice(_CITIES)}-{rng.randint(10, 99)}"
            block.append((name, rng.randint(5, 400), round(rng.uniform(0.5, 40.0), 2)))
        lines.extend(f"{n},{v},{m:.2f}" for n, v, m in block)
        lines.append(f"TOTAL,{sum(v for _, v, _ in block)},{sum(m for _, _, m in block):.2f}")
    csv_text = "\n".join(lines) + "\n"

    facts = []
    for k in range(rng.randint(3, 5)):
        facts.append(
            f"The {rng.choice(_SECTORS)} market in {rng.choice(_CITIES)} grew by "
            f"{rng.randint(2, 19)} percent in fiscal year {rng.randint(2021, 2025)}, fact {case_id}-{k}."
        )
    source_name = f"market-notes-{case_id}.md"
    source_text = "# Market notes\n\n" + "\n\n".join(facts) + "\n"

    cited = rng.sample(facts, k=min(2, len(facts)))
    citations = tuple(Citation(claim_span=fact, source_ref=source_name) for fact in cited)
    return Bundle(
        task_id=f"corpus-{case_id}",
        summary=f"Compiled {metric} table with group totals and cited market notes ({case_id}).",
        files=({"name": f"companies-{case_id}.csv", "media_kind": "spreadsheet", "content": csv_text},),
        citations=citations,
        sources=({"name": source_name, "media_kind": "document", "content": source_text},),
    )


def _inject_faults(clean: Bundle, rng: random.Random) -> tuple[Bundle, list[dict[str, str]]]:
    manifest: list[dict[str, str]] = []

    # sum fault(s): perturb one numeric cell of a declared-total row
    file_entry = dict(clean.files[0])
    rows = file_entry["content"].strip().split("\n")
    total_positions = [i for i, line in enumerate(rows) if line.startswith("TOTAL,")]
    chosen = rng.sample(total_positions, k=rng.randint(1, len(total_positions)))
    for pos in chosen:
        cells = rows[pos].split(",")
        col = rng.choice([1, 2])
        if col == 1:
            cells[col] = str(int(cells[col]) + rng.choice([-7, -3, 2, 5, 11]))
        else:
            cells[col] = f"{float(cells[col]) + rng.choice([-4.5, -1.25, 2.75, 6.5]):.2f}"
        rows[pos] = ",".join(cells)
        manifest.append(
            {
                "code": "table.sum_mismatch",
                "file": file_entry["name"],
                "location": f"row {pos}, col {col}",  # data-row index: header is line 0
            }
        )
    file_entry["content"] = "\n".join(rows) + "\n"

    # fabricated citation: unresolvable ref or quote not present in the source
    citations = list(clean.citations)
    idx = rng.randrange(len(citations))
    if rng.random() < 0.5:
        citations[idx] = Citation(claim_span=citations[idx].claim_span, source_ref="ghost-report.pdf")
        manifest.append({"code": "citation.unresolved", "file": "ghost-report.pdf", "location": f"citation {idx}"})
    else:
        fabricated = (
            f"The sector consolidated dramatically, with {rng.randint(60, 95)} percent of vendors "
            f"exiting by {rng.randint(2020, 2024)}."
        )
        citations[idx] = Citation(claim_span=fabricated, source_ref=citations[idx].source_ref)
        manifest.append(
            {"code": "citation.quote_missing", "file": clean.sources[0]["name"], "location": f"citation {idx}"}
        )

    faulty = Bundle(
        task_id=clean.task_id,
        summary=clean.summary,
        files=(file_entry,),
        citations=tuple(citations),
        sources=clean.sources,
    )
    return faulty, manifest


def generate_corpus(
    root: str | Path, n_cases: int = DEFAULT_CORPUS_SIZE, seed: int = DEFAULT_CORPUS_SEED
) -> list[Path]:
    """Write n (clean, faulty, manifest) triples under root; returns case dirs."""
    root = Path(root)
    rng = random.Random(seed)
    dirs = []
    for i in range(n_cases):
        case_id = f"{i:02d}"
        case_dir = root / f"case_{case_id}"
        case_dir.mkdir(parents=True, exist_ok=True)
        clean = _make_clean_case(case_id, rng)
        faulty, manifest = _inject_faults(clean, rng)
        (case_dir / "clean.json").write_text(json.dumps(clean.to_dict(), indent=2), encoding="utf-8")
        (case_dir / "faulty.json").write_text(json.dumps(faulty.to_dict(), indent=2), encoding="utf-8")
        (case_dir / "manifest.json").write_text(
            json.dumps({"case": f"case_{case_id}", "faults": manifest}, indent=2), encoding="utf-8"
        )
        dirs.append(case_dir)
    return dirs


def load_case(case_dir: str | Path) -> tuple[Bundle, Bundle, list[dict[str, str]]]:
    case_dir = Path(case_dir)
    clean = Bundle.from_dict(json.loads((case_dir / "clean.json").read_text(encoding="utf-8")))
    faulty = Bundle.from_dict(json.loads((case_dir / "faulty.json").read_text(encoding="utf-8")))
    manifest = json.loads((case_dir / "manifest.json").read_text(encoding="utf-8"))["faults"]
    return clean, faulty, manifest
