"""Build the released benchmark dataset (data/benchmark/).

94 task briefs following the released area/category distribution, one
markdown brief per task plus a JSONL manifest. Deterministic: same seed,
same bytes.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from gatework.stats.dataset import RELEASED_DISTRIBUTION  # noqa: E402

OUT_DIR = REPO / "src" / "gatework" / "data" / "benchmark"
SEED = 417

SUBJECTS = {
    "Sales": ["SaaS vendors", "logistics startups", "industrial suppliers", "design agencies"],
    "Operations": ["supplier invoices", "support tickets", "inventory exports", "meeting notes"],
    "Marketing": ["competitor blogs", "product launch posts", "newsletter archives", "landing pages"],
    "Analysis": ["weekly sales figures", "user survey responses", "traffic logs", "churn reports"],
}
REGIONS = ["the Berlin area", "the Austin metro", "the Nordics", "the UK market", "Western Europe", "North America"]

CRITERIA_POOL = [
    ("has_file:report", "Deliver a written report file."),
    ("format_is:csv", "Tabular output must be CSV."),
    ("column_present:email", "Contact tables need an email column."),
    ("total_declared", "Number columns should declare a TOTAL row."),
    ("Sources must be publicly verifiable.", None),
    ("Keep the final summary under one page.", None),
    ("Use consistent units throughout.", None),
]


def brief_text(area: str, category: str, rng: random.Random) -> tuple[str, list[str]]:
    subject = rng.choice(SUBJECTS[area])
    region = rng.choice(REGIONS)
    count = rng.choice([20, 25, 30, 40, 50])
    body = (
        f"{category} for {subject} in {region}. "
        f"Work from public sources, structure the result so it can be used without follow-up, "
        f"and flag anything you could not verify."
    )
    criteria = [f"row_count>={min(count, 30)}"] if "Data" in category or "Fields" in category else []
    picks = rng.sample(CRITERIA_POOL, k=rng.randint(2, 3))
    criteria.extend(tag for tag, _ in picks)
    return body, criteria


def main() -> None:
    rng = random.Random(SEED)
    briefs_dir = OUT_DIR / "briefs"
    briefs_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    task_no = 0
    for (area, category), count in RELEASED_DISTRIBUTION.items():
        for _ in range(count):
            task_no += 1
            task_id = f"T{task_no:03d}"
            body, criteria = brief_text(area, category, rng)
            brief_path = f"briefs/{task_id}.md"
            lines = [
                f"# {task_id}: {category}",
                "",
                f"Area: {area}",
                "",
                body,
                "",
                "## Acceptance criteria",
                "",
            ]
            lines.extend(f"- {c}" for c in criteria)
            (briefs_dir / f"{task_id}.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
            rows.append(
                {
                    "task_id": task_id,
                    "area": area,
                    "category": category,
                    "brief_path": brief_path,
                    "attachments": [],
                }
            )

    manifest = OUT_DIR / "manifest.jsonl"
    with manifest.open("w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, sort_keys=True))
            f.write("\n")
    print(f"wrote {len(rows)} tasks to {manifest}")


if __name__ == "__main__":
    main()
