"""Build the reference evaluation fixture (data/reference/labels.jsonl).

Constructs 94 labeled results per system whose aggregates reproduce the
published reference numbers:

- label counts recovered by derive_label_counts (shares + binomial SEs)
- column medians pinned exactly: the two middle order statistics sit at
  the published value, 46 values strictly below, 46 strictly above
- column means hit the published one-decimal averages via a balancer cell
- six fixed (connect, exec) pairs per system pin the total median as well,
  and total = connect + exec per record so average-row arithmetic is exact

Every constraint is asserted before the fixture is written.
"""

from __future__ import annotations

import statistics
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from derive_label_counts import N_TASKS, derive  # noqa: E402

from gatework.quality import CRITERIA, Grade  # noqa: E402
from gatework.stats.records import LabeledResult, write_results_file  # noqa: E402

OUT = REPO / "src" / "gatework" / "data" / "reference" / "labels.jsonl"


def spread(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [round(lo, 2)]
    return [round(lo + (hi - lo) * i / (n - 1), 2) for i in range(n)]


def add_tail(values: list[float], extra: list[float]) -> list[float]:
    out = list(values)
    for offset, boost in enumerate(extra, start=1):
        out[-offset] = round(out[-offset] + boost, 2)
    return out


def balance_to(values: list[float], target_sum: float) -> list[float]:
    """Adjust the largest cell so the column sums to target_sum."""
    out = list(values)
    idx = max(range(len(out)), key=out.__getitem__)
    out[idx] = round(target_sum - (sum(out) - out[idx]), 2)
    assert abs(sum(out) - target_sum) < 0.005, (sum(out), target_sum)
    return out


def check_median_blocks(low: list[float], mid: float, high: list[float]) -> None:
    assert len(low) == 46 and len(high) == 46
    assert max(low) < mid < min(high), (max(low), mid, min(high))
    assert statistics.median(sorted(low + [mid, mid] + high)) == mid


def time_pairs(
    low_c: list[float],
    low_e: list[float],
    fixed: list[tuple[float, float]],
    high_c: list[float],
    high_e: list[float],
    medians: tuple[float, float, float],  # (connect, exec, total)
    printed_avgs: tuple[float, float],  # (connect, exec) at one decimal
) -> list[tuple[float, float, float]]:
    """44 low pairs + 6 fixed pairs + 44 high pairs, all medians pinned."""
    c_med, e_med, t_med = medians
    assert len(low_c) == len(low_e) == len(high_c) == len(high_e) == 44 and len(fixed) == 6
    pairs = list(zip(low_c, low_e)) + fixed + list(zip(high_c, high_e))
    assert len(pairs) == N_TASKS

    connect = [c for c, _ in pairs]
    execution = [e for _, e in pairs]
    check_median_blocks(sorted(connect)[:46], c_med, sorted(connect)[48:])
    assert sorted(connect)[46:48] == [c_med, c_med]
    check_median_blocks(sorted(execution)[:46], e_med, sorted(execution)[48:])
    assert sorted(execution)[46:48] == [e_med, e_med]

    totals = sorted(round(c + e, 2) for c, e in pairs)
    assert sum(1 for t in totals if t < t_med) == 46
    assert totals[46:48] == [t_med, t_med]
    assert sum(1 for t in totals if t > t_med) == 46
    assert statistics.median(totals) == t_med

    assert round(statistics.fmean(connect), 1) == printed_avgs[0], statistics.fmean(connect)
    assert round(statistics.fmean(execution), 1) == printed_avgs[1], statistics.fmean(execution)
    return [(c, e, round(c + e, 2)) for c, e in pairs]


def price_column(low: list[float], mid: float, high: list[float], target_sum: float) -> list[float]:
    high = balance_to(high, target_sum - sum(low) - 2 * mid)
    check_median_blocks(low, mid, high)
    return low + [mid, mid] + high


def hybrid_times() -> list[tuple[float, float, float]]:
    fixed = [(2.60, 9.00), (2.60, 20.00), (1.50, 10.50), (9.00, 10.50), (2.00, 14.42), (6.42, 10.00)]
    low_c = spread(0.30, 2.50, 44)
    low_e = spread(2.00, 10.00, 44)
    fixed_c_sum = sum(c for c, _ in fixed)
    fixed_e_sum = sum(e for _, e in fixed)
    high_c = balance_to(
        add_tail(spread(3.00, 7.00, 44), [60.0, 35.0, 25.0, 15.0, 10.0, 5.0]),
        4.8 * N_TASKS - sum(low_c) - fixed_c_sum,
    )
    high_e = balance_to(
        add_tail(spread(13.50, 19.50, 44), [300.0, 130.0, 110.0, 90.0, 70.0, 60.0, 50.0, 40.0, 30.0, 20.0]),
        20.9 * N_TASKS - sum(low_e) - fixed_e_sum,
    )
    return time_pairs(low_c, low_e, fixed, high_c, high_e, (2.60, 10.50, 16.42), (4.8, 20.9))


def marketplace_times() -> list[tuple[float, float, float]]:
    fixed = [(4.60, 20.00), (4.60, 40.00), (3.00, 26.80), (9.00, 26.80), (4.00, 30.97), (8.97, 26.00)]
    low_c = spread(0.50, 4.40, 44)
    low_e = spread(6.00, 26.00, 44)
    high_c = balance_to(
        add_tail(spread(5.50, 15.00, 44), [205.0, 180.0, 150.0, 100.0, 80.0, 60.0]),
        14.46 * N_TASKS - sum(low_c) - sum(c for c, _ in fixed),
    )
    high_e = balance_to(
        add_tail(spread(30.00, 48.00, 44), [270.0, 250.0, 220.0, 180.0, 150.0]),
        38.26 * N_TASKS - sum(low_e) - sum(e for _, e in fixed),
    )
    return time_pairs(low_c, low_e, fixed, high_c, high_e, (4.60, 26.80, 34.97), (14.5, 38.3))


def ai_agent_times() -> list[tuple[float, float, float]]:
    low_e = spread(0.02, 0.12, 46)
    high_e = balance_to(add_tail(spread(0.14, 0.34, 46), [1.28, 1.20, 1.00, 0.80]), 0.2 * N_TASKS - sum(low_e) - 0.26)
    execution = low_e + [0.13, 0.13] + high_e
    check_median_blocks(low_e, 0.13, high_e)
    assert round(statistics.fmean(execution), 1) == 0.2
    assert statistics.median(sorted(execution)) == 0.13
    return [(0.0, e, e) for e in execution]


def label_columns(system: str) -> list[dict[str, Grade]]:
    """Per-task criterion grades matching the derived counts."""
    counts = derive()[system]
    n_decline = counts["Overall"]["Decline"]
    decline_ids = set(range(N_TASKS - n_decline, N_TASKS))
    labels: list[dict[str, Grade]] = [{} for _ in range(N_TASKS)]
    for criterion in CRITERIA:
        cell = counts[criterion]
        good = cell["Good"]
        if criterion == "Overall":
            blocks = [(Grade.GOOD, good), (Grade.MEDIOCRE, cell["Mediocre"]), (Grade.BAD, cell["Bad"])]
        else:
            blocks = [(Grade.GOOD, good), (Grade.MEDIOCRE, N_TASKS - n_decline - good)]
        sequence: list[Grade] = []
        for grade, count in blocks:
            sequence.extend([grade] * count)
        assert len(sequence) == N_TASKS - n_decline
        position = 0
        for task_index in range(N_TASKS):
            if task_index in decline_ids:
                labels[task_index][criterion] = Grade.DECLINE
            else:
                labels[task_index][criterion] = sequence[position]
                position += 1
    return labels


def price_values(system: str) -> list[float | None]:
    if system == "hybrid":
        return price_column(
            spread(12.00, 30.00, 46),
            32.00,
            add_tail(spread(34.00, 50.00, 46), [740.0, 700.0, 600.0, 500.0, 400.0, 300.0, 200.0, 100.0]),
            69.2 * N_TASKS,
        )
    if system == "marketplace_human":
        return price_column(
            spread(25.00, 49.00, 46),
            50.00,
            add_tail(spread(50.50, 58.00, 46), [80.0, 70.0, 60.0]),
            48.0 * N_TASKS,
        )
    return [None] * N_TASKS


def build() -> list[LabeledResult]:
    times = {
        "hybrid": hybrid_times(),
        "marketplace_human": marketplace_times(),
        "ai_agent": ai_agent_times(),
    }
    records: list[LabeledResult] = []
    for system, system_times in times.items():
        labels = label_columns(system)
        prices = price_values(system)
        for i, (connect, execution, total) in enumerate(system_times):
            records.append(
                LabeledResult(
                    task_id=f"T{i + 1:03d}",
                    system_id=system,
                    labels=tuple(sorted(labels[i].items())),
                    connect_h=connect,
                    exec_h=execution,
                    total_h=total,
                    price_usd=prices[i],
                )
            )
    return records


def main() -> None:
    records = build()
    assert len(records) == 3 * N_TASKS
    OUT.parent.mkdir(parents=True, exist_ok=True)
    write_results_file(OUT, records)
    print(f"wrote {len(records)} records to {OUT}")

    # quick verification of the headline aggregates
    from gatework.stats.shares import quality_shares
    from gatework.stats.summary import summarize_time_price

    for system in ("hybrid", "marketplace_human", "ai_agent"):
        shares = quality_shares(records, system, "Overall")
        summary = summarize_time_price(records, system, n_replicates=200)
        price = "-" if summary.price is None else f"{summary.price.avg:.1f}/{summary.price.median:.1f}"
        print(
            f"{system}: Good {shares[Grade.GOOD].pct:.1f}+-{shares[Grade.GOOD].pct_se:.1f} | "
            f"connect {summary.connect.avg:.1f}/{summary.connect.median:.2f} | "
            f"exec {summary.exec.avg:.1f}/{summary.exec.median:.2f} | "
            f"total {summary.total.avg:.1f}/{summary.total.median:.2f} | price {price}"
        )


if __name__ == "__main__":
    main()
