"""Labeled evaluation results and their newline-delimited file format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

from gatework.quality import CRITERIA, Grade

#: source data is rounded to 0.01 h, so the additivity check gets slack
TOTAL_TOLERANCE_H = 0.15


@dataclass(frozen=True)
class LabeledResult:
    """One task's evaluation under one (anonymized) system."""

    task_id: str
    system_id: str
    labels: tuple[tuple[str, Grade], ...]  # criterion -> grade, all four criteria
    connect_h: float
    exec_h: float
    total_h: float
    price_usd: float | None = None
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        got = {c for c, _ in self.labels}
        if got != set(CRITERIA):
            raise ValueError(f"labels must cover exactly {CRITERIA}, got {sorted(got)}")
        grades = dict(self.labels)
        if any(g is Grade.DECLINE for g in grades.values()) and not all(
            g is Grade.DECLINE for g in grades.values()
        ):
            raise ValueError("a declined task is declined on all four criteria")
        if abs(self.total_h - (self.connect_h + self.exec_h)) > TOTAL_TOLERANCE_H:
            raise ValueError(
                f"total_h {self.total_h} deviates from connect+exec "
                f"{self.connect_h + self.exec_h} by more than {TOTAL_TOLERANCE_H}"
            )

    def grade(self, criterion: str) -> Grade:
        return dict(self.labels)[criterion]

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "system_id": self.system_id,
            "labels": {c: g.value for c, g in self.labels},
            "connect_h": self.connect_h,
            "exec_h": self.exec_h,
            "total_h": self.total_h,
            "price_usd": self.price_usd,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LabeledResult":
        labels = tuple(sorted((c, Grade(g)) for c, g in d["labels"].items()))
        price = d.get("price_usd")
        return cls(
            task_id=d["task_id"],
            system_id=d["system_id"],
            labels=labels,
            connect_h=float(d["connect_h"]),
            exec_h=float(d["exec_h"]),
            total_h=float(d["total_h"]),
            price_usd=None if price is None else float(price),
            notes=d.get("notes", ""),
        )


def write_results_file(path: str | Path, records: Iterable[LabeledResult]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(json.dumps(record.to_dict(), sort_keys=True))
            f.write("\n")


def read_results_file(path: str | Path) -> list[LabeledResult]:
    records = []
    with Path(path).open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(LabeledResult.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: not a labeled-result record ({exc})") from exc
    return records
