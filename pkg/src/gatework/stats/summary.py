"""Time/price summaries and the quality-vs-time frontier."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from gatework.errors import NoRecords, SystemMismatch
from gatework.quality import Grade
from gatework.stats.bootstrap import DEFAULT_B, bootstrap_median_se
from gatework.stats.records import LabeledResult
from gatework.stats.shares import ShareEstimate


@dataclass(frozen=True)
class MetricSummary:
    avg: float
    median: float
    avg_sd: float  # sample standard deviation; 0 by convention for n=1
    median_boot_se: float

    def to_dict(self) -> dict[str, float]:
        return {
            "avg": self.avg,
            "median": self.median,
            "avg_sd": self.avg_sd,
            "median_boot_se": self.median_boot_se,
        }


@dataclass(frozen=True)
class SummaryRow:
    system_id: str
    price: MetricSummary | None  # None when no record carries a price
    connect: MetricSummary
    exec: MetricSummary
    total: MetricSummary

    def to_dict(self) -> dict:
        return {
            "system_id": self.system_id,
            "price": None if self.price is None else self.price.to_dict(),
            "connect": self.connect.to_dict(),
            "exec": self.exec.to_dict(),
            "total": self.total.to_dict(),
        }


def _summarize(values: Sequence[float], n_replicates: int, seed: int) -> MetricSummary:
    avg = sum(values) / len(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return MetricSummary(
        avg=avg,
        median=statistics.median(values),
        avg_sd=sd,
        median_boot_se=bootstrap_median_se(values, n_replicates, seed=seed),
    )


def summarize_time_price(
    records: Sequence[LabeledResult],
    system_id: str,
    n_replicates: int = DEFAULT_B,
    seed: int = 0,
) -> SummaryRow:
    """Averages with sample SD; medians with bootstrap SE. Hours and USD."""
    mine = [r for r in records if r.system_id == system_id]
    if not mine:
        raise NoRecords(f"no labeled results for system {system_id!r}")
    prices = [r.price_usd for r in mine if r.price_usd is not None]
    return SummaryRow(
        system_id=system_id,
        price=_summarize(prices, n_replicates, seed) if prices else None,
        connect=_summarize([r.connect_h for r in mine], n_replicates, seed + 1),
        exec=_summarize([r.exec_h for r in mine], n_replicates, seed + 2),
        total=_summarize([r.total_h for r in mine], n_replicates, seed + 3),
    )


@dataclass(frozen=True)
class FrontierPoint:
    median_total_h: float  # rounded to 0.01 h
    pct_good: float  # rounded to 0.1 pp
    system_id: str


def frontier_points(
    summaries: Mapping[str, SummaryRow],
    shares: Mapping[str, Mapping[Grade, ShareEstimate]],
) -> list[FrontierPoint]:
    """One (median total hours, % Good) point per system, sorted by system id."""
    if set(summaries) != set(shares):
        missing = set(summaries) ^ set(shares)
        raise SystemMismatch(f"summaries and shares cover different systems: {sorted(missing)}")
    points = []
    for system_id in sorted(summaries):
        median_total = summaries[system_id].total.median
        pct_good = shares[system_id][Grade.GOOD].pct
        points.append(
            FrontierPoint(
                median_total_h=round(median_total, 2),
                pct_good=round(pct_good, 1),
                system_id=system_id,
            )
        )
    return points
