"""Recover integer label counts from the published percentage aggregates.

The reference comparison study published shares rounded to one decimal
over n=94 tasks per system. For each printed percentage there is exactly
one count k in 0..94 with round(100*k/94, 1) equal to it; this script
recovers those counts by exhaustive search, asserts uniqueness, and checks
that each system's four Overall counts sum to 94.

Run as a script to print the table; the fixture builder imports derive().
"""

from __future__ import annotations

N_TASKS = 94

#: printed Overall shares per system: (good, mediocre, bad, decline) in percent
PUBLISHED_OVERALL = {
    "hybrid": (74.5, 16.0, 8.5, 1.1),
    "marketplace_human": (53.2, 25.5, 21.3, 0.0),
    "ai_agent": (40.4, 19.1, 36.2, 4.3),
}

#: printed % Good for the three sub-criteria: (accuracy, completeness, style)
PUBLISHED_CRITERIA_GOOD = {
    "hybrid": (74.5, 81.9, 70.2),
    "marketplace_human": (63.8, 59.6, 59.6),
    "ai_agent": (48.9, 48.9, 51.1),
}


def count_for_percentage(pct: float, n: int = N_TASKS) -> int:
    """The unique k with round(100k/n, 1) == pct."""
    hits = [k for k in range(n + 1) if round(100.0 * k / n, 1) == round(pct, 1)]
    if len(hits) != 1:
        raise ValueError(f"{pct}% over n={n} maps to counts {hits}, expected exactly one")
    return hits[0]


def derive() -> dict[str, dict[str, dict[str, int]]]:
    """system -> criterion -> grade -> count (sub-criteria carry Good only)."""
    out: dict[str, dict[str, dict[str, int]]] = {}
    for system, (good, med, bad, dec) in PUBLISHED_OVERALL.items():
        counts = {
            "Good": count_for_percentage(good),
            "Mediocre": count_for_percentage(med),
            "Bad": count_for_percentage(bad),
            "Decline": count_for_percentage(dec),
        }
        if sum(counts.values()) != N_TASKS:
            raise ValueError(f"{system}: Overall counts {counts} do not sum to {N_TASKS}")
        acc, comp, style = PUBLISHED_CRITERIA_GOOD[system]
        out[system] = {
            "Overall": counts,
            "Accuracy": {"Good": count_for_percentage(acc), "Decline": counts["Decline"]},
            "Completeness": {"Good": count_for_percentage(comp), "Decline": counts["Decline"]},
            "StyleFormatting": {"Good": count_for_percentage(style), "Decline": counts["Decline"]},
        }
    return out


if __name__ == "__main__":
    for system, criteria in derive().items():
        print(system)
        for criterion, counts in criteria.items():
            print(f"  {criterion}: {counts}")
