"""Released benchmark dataset: manifest model and distribution validation.

The released distribution is the ground truth the validator checks against:
94 tasks across four areas, counted per (area, category) cell.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from gatework.core.types import Area
from gatework.errors import DistributionMismatch, ManifestInvalid

#: (area, category) -> released task count
RELEASED_DISTRIBUTION: dict[tuple[str, str], int] = {
    ("Sales", "Collect Business Contact Data"): 14,
    ("Sales", "Complete Missing Fields (enrichment)"): 6,
    ("Operations", "Build Multi-step Automation Workflows"): 1,
    ("Operations", "Collect Data"): 10,
    ("Operations", "Convert Formats"): 2,
    ("Operations", "Retrieve PDF / Document / Report Content"): 3,
    ("Operations", "Schedule & Manage Appointments & Calls"): 3,
    ("Operations", "Structure Raw Data into Schema"): 6,
    ("Operations", "Validate Contact Info"): 3,
    ("Marketing", "Collect Business Contact Data"): 4,
    ("Marketing", "Create Content"): 7,
    ("Marketing", "Market & Competitive Research Reports"): 10,
    ("Marketing", "Proofread, analyse and correct content"): 3,
    ("Analysis", "Customer / User Interviews or Feedback Collection"): 1,
    ("Analysis", "Generate Performance Dashboards & Summaries"): 8,
    ("Analysis", "Market & Competitive Research Reports"): 8,
    ("Analysis", "Run Exploratory Data Analysis"): 5,
}

RELEASED_AREA_TOTALS: dict[str, int] = {
    "Sales": 20,
    "Operations": 28,
    "Marketing": 24,
    "Analysis": 22,
}

RELEASED_TOTAL = 94


@dataclass(frozen=True)
class DatasetTask:
    task_id: str
    area: Area
    category: str
    brief_path: str
    attachments: tuple[str, ...] = ()


@dataclass(frozen=True)
class Dataset:
    tasks: tuple[DatasetTask, ...]
    cell_counts: dict[tuple[str, str], int]
    area_counts: dict[str, int]
    mismatches: tuple[str, ...]

    @property
    def total(self) -> int:
        return len(self.tasks)

    def validation_report(self) -> str:
        lines = [f"tasks: {self.total} (released: {RELEASED_TOTAL})"]
        for area in RELEASED_AREA_TOTALS:
            lines.append(f"  {area}: {self.area_counts.get(area, 0)} (released: {RELEASED_AREA_TOTALS[area]})")
        if self.mismatches:
            lines.append("mismatches:")
            lines.extend(f"  {m}" for m in self.mismatches)
        else:
            lines.append("distribution matches the released benchmark")
        return "\n".join(lines)


def _distribution_mismatches(
    cell_counts: dict[tuple[str, str], int], area_counts: dict[str, int], total: int
) -> list[str]:
    mismatches = []
    for cell in sorted(set(RELEASED_DISTRIBUTION) | set(cell_counts)):
        got = cell_counts.get(cell, 0)
        want = RELEASED_DISTRIBUTION.get(cell, 0)
        if got != want:
            mismatches.append(f"{cell[0]} / {cell[1]}: {got} vs {want}")
    for area in sorted(set(RELEASED_AREA_TOTALS) | set(area_counts)):
        got = area_counts.get(area, 0)
        want = RELEASED_AREA_TOTALS.get(area, 0)
        if got != want:
            mismatches.append(f"{area}: {got} vs {want}")
    if total != RELEASED_TOTAL:
        mismatches.append(f"total: {total} vs {RELEASED_TOTAL}")
    return mismatches


def read_brief_file(path: str | Path) -> tuple[str, list[str]]:
    """Parse a benchmark brief markdown file into (body text, criteria).

    Criteria are the bullet items under the "Acceptance criteria" heading;
    everything above that heading (minus title/metadata lines) is the body.
    """
    body_lines: list[str] = []
    criteria: list[str] = []
    in_criteria = False
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        stripped = line.strip()
        if stripped.lower().startswith("## acceptance criteria"):
            in_criteria = True
            continue
        if in_criteria:
            if stripped.startswith("- "):
                criteria.append(stripped[2:].strip())
            continue
        if stripped.startswith("#") or stripped.lower().startswith("area:") or not stripped:
            continue
        body_lines.append(stripped)
    return " ".join(body_lines), criteria


def load_benchmark(manifest_path: str | Path, strict: bool = False) -> Dataset:
    """Parse the manifest and compare its distribution to the released one.

    strict=True raises DistributionMismatch (naming every mismatched cell);
    otherwise the mismatches ride along in the returned Dataset.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise ManifestInvalid(f"manifest not found: {manifest_path}")

    tasks: list[DatasetTask] = []
    seen: set[str] = set()
    for lineno, line in enumerate(manifest_path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row: dict[str, Any] = json.loads(line)
            task = DatasetTask(
                task_id=row["task_id"],
                area=Area(row["area"]),
                category=row["category"],
                brief_path=row["brief_path"],
                attachments=tuple(row.get("attachments", [])),
            )
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ManifestInvalid(f"manifest line {lineno}: {exc}") from exc
        if task.task_id in seen:
            raise ManifestInvalid(f"duplicate task_id {task.task_id!r} (line {lineno})")
        seen.add(task.task_id)
        tasks.append(task)

    if not tasks:
        raise ManifestInvalid(f"manifest is empty: {manifest_path}")

    cell_counts: dict[tuple[str, str], int] = {}
    area_counts: dict[str, int] = {}
    for task in tasks:
        cell = (task.area.value, task.category)
        cell_counts[cell] = cell_counts.get(cell, 0) + 1
        area_counts[task.area.value] = area_counts.get(task.area.value, 0) + 1

    mismatches = _distribution_mismatches(cell_counts, area_counts, len(tasks))
    if strict and mismatches:
        raise DistributionMismatch(mismatches)
    return Dataset(
        tasks=tuple(tasks),
        cell_counts=cell_counts,
        area_counts=area_counts,
        mismatches=tuple(mismatches),
    )
