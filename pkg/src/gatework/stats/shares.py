"""Outcome shares with binomial standard errors.

Decline is a first-class outcome: it stays in every denominator, so the
four shares of a system sum to exactly 1 (they are integer counts over the
same n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from gatework.errors import NoRecords
from gatework.quality import GRADE_ORDER, Grade
from gatework.stats.records import LabeledResult


@dataclass(frozen=True)
class ShareEstimate:
    share: float
    se: float
    n: int

    def __post_init__(self):
        if not (0.0 <= self.share <= 1.0):
            raise ValueError("share must lie in [0, 1]")

    @classmethod
    def from_count(cls, count: int, n: int) -> "ShareEstimate":
        share = count / n
        return cls(share=share, se=math.sqrt(share * (1.0 - share) / n), n=n)

    @property
    def pct(self) -> float:
        return 100.0 * self.share

    @property
    def pct_se(self) -> float:
        return 100.0 * self.se


def quality_shares(
    records: Sequence[LabeledResult], system_id: str, criterion: str = "Overall"
) -> dict[Grade, ShareEstimate]:
    """Good/Mediocre/Bad/Decline shares for one system and criterion."""
    mine = [r for r in records if r.system_id == system_id]
    if not mine:
        raise NoRecords(f"no labeled results for system {system_id!r}")
    n = len(mine)
    counts = {grade: 0 for grade in GRADE_ORDER}
    for record in mine:
        counts[record.grade(criterion)] += 1
    return {grade: ShareEstimate.from_count(counts[grade], n) for grade in GRADE_ORDER}
