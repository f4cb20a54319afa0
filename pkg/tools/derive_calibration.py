"""Derive the shipped simulator calibration config (data/calibration.json).

Quality: the hybrid two-stage model is solved in closed form. The AI-stage
distribution is fitted to the published ai-agent shares; the gate and
escalation ladders are fixed except the escalation ladder's Bad row, which
is solved so the hybrid marginals land exactly on the published hybrid
counts (70/15/8/1 over 94). The Decline row keeps exactly the probability
needed for the published hybrid decline share.

Time: the human-only and hybrid time distributions are lognormals fitted
to published (median, average) pairs; the hybrid base execution median is
then solved by bisection on a large Monte Carlo sample so that
median(hybrid total) / median(human total) = 0.47.

The script verifies the solved config by running the real engine before
writing the JSON.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))
sys.path.insert(0, str(Path(__file__).parent))

from derive_label_counts import derive  # noqa: E402

OUT = REPO / "src" / "gatework" / "data" / "calibration.json"

N = 94
TARGET_RATIO = 0.47
MC_SAMPLES = 400_000
MC_SEED = 777


def sigma_from_median_mean(median: float, mean: float) -> float:
    return math.sqrt(2.0 * math.log(mean / median))


def solve_quality_ladders() -> dict:
    counts = derive()
    ai = counts["ai_agent"]["Overall"]
    hybrid = counts["hybrid"]["Overall"]

    p_decline = ai["Decline"] / N
    p_good, p_med, p_bad = (ai[g] / N for g in ("Good", "Mediocre", "Bad"))
    t_good, t_med, t_bad, t_decl = (hybrid[g] / N for g in ("Good", "Mediocre", "Bad", "Decline"))

    extra = 0.08  # extra escalation probability for Good/Mediocre AI-stage draws
    gate_g = (0.97, 0.025, 0.005, 0.0)
    gate_m = (0.52, 0.455, 0.025, 0.0)
    esc_g = (0.97, 0.03, 0.0, 0.0)
    esc_m = (0.70, 0.28, 0.02, 0.0)
    d_keep = t_decl / p_decline  # P(stay declined | AI declined)
    esc_d = (0.45 * (1 - d_keep) / 0.75, 0.22 * (1 - d_keep) / 0.75, 0.08 * (1 - d_keep) / 0.75, d_keep)
    assert abs(sum(esc_d) - 1.0) < 1e-12

    stay = 1.0 - extra
    contrib = [0.0, 0.0, 0.0]  # Good, Mediocre, Bad from everything except the AI-Bad mass
    for weight, row in (
        (p_good * stay, gate_g),
        (p_med * stay, gate_m),
        (p_good * extra, esc_g),
        (p_med * extra, esc_m),
        (p_decline, esc_d),
    ):
        for k in range(3):
            contrib[k] += weight * row[k]

    esc_b = tuple((target - got) / p_bad for target, got in zip((t_good, t_med, t_bad), contrib)) + (0.0,)
    assert all(b >= 0 for b in esc_b), esc_b
    assert abs(sum(esc_b) - 1.0) < 1e-9, esc_b

    # closed-form check of the final marginals
    finals = [contrib[k] + p_bad * esc_b[k] for k in range(3)] + [p_decline * d_keep]
    for got, want in zip(finals, (t_good, t_med, t_bad, t_decl)):
        assert abs(got - want) < 1e-12, (finals, (t_good, t_med, t_bad, t_decl))

    def row_dict(row):
        return {"Good": row[0], "Mediocre": row[1], "Bad": row[2], "Decline": row[3]}

    return {
        "extra_escalation_prob": extra,
        "gate_ladder": {
            "Good": row_dict(gate_g),
            "Mediocre": row_dict(gate_m),
            "Bad": row_dict((0.30, 0.50, 0.20, 0.0)),  # unused: Bad always escalates
        },
        "escalation_ladder": {
            "Good": row_dict(esc_g),
            "Mediocre": row_dict(esc_m),
            "Bad": row_dict(esc_b),
            "Decline": row_dict(esc_d),
        },
    }


def solve_time_params(quality: dict) -> dict:
    rng = np.random.default_rng(MC_SEED)
    n = MC_SAMPLES

    # human-only: connect LN(median 4.6 -> mean 14.5), exec LN(median 26.8 -> mean 38.3)
    s_hc = sigma_from_median_mean(4.6, 14.5)
    s_he = sigma_from_median_mean(26.8, 38.3)
    human_total = 4.6 * np.exp(s_hc * rng.standard_normal(n)) + 26.8 * np.exp(s_he * rng.standard_normal(n))
    human_median = float(np.median(human_total))
    target_median = TARGET_RATIO * human_median

    # hybrid pieces: connect fitted to (2.6, 4.8); repair spread fixed; base solved
    s_conn = sigma_from_median_mean(2.6, 4.8)
    s_base = 0.9
    repair_median, s_repair = 8.0, 0.7

    p_decline = 4 / N
    p_bad_given_ok = (34 / N) / (1 - p_decline)
    extra = quality["extra_escalation_prob"]
    d_keep = quality["escalation_ladder"]["Decline"]["Decline"]

    u_decl = rng.random(n)
    u_quality = rng.random(n)
    u_extra = rng.random(n)
    u_repair = rng.random(n)
    z_conn = rng.standard_normal(n)
    z_base = rng.standard_normal(n)
    z_rep = rng.standard_normal(n)

    declined_ai = u_decl < p_decline
    bad_ai = ~declined_ai & (u_quality < p_bad_given_ok)
    escalated = declined_ai | bad_ai | (u_extra < extra)
    stays_declined = declined_ai & (u_repair < d_keep)

    conn = 2.6 * np.exp(s_conn * z_conn)
    base_unit = np.exp(s_base * z_base)
    repair = np.where(escalated, repair_median * np.exp(s_repair * z_rep), 0.0)

    def median_total(base_median: float) -> float:
        exec_h = np.where(stays_declined, 0.0, base_median * base_unit + repair)
        return float(np.median(conn + exec_h))

    lo, hi = 0.5, 30.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if median_total(mid) < target_median:
            lo = mid
        else:
            hi = mid
    base_median = round(0.5 * (lo + hi), 4)

    print(f"human median total (MC): {human_median:.3f} h; target hybrid median: {target_median:.3f} h")
    print(f"solved hybrid base exec median: {base_median} h (ratio {median_total(base_median) / human_median:.4f})")

    return {
        "human": {"connect_sigma": s_hc, "exec_sigma": s_he},
        "hybrid": {
            "connect": {"median_h": 2.6, "sigma": round(s_conn, 6)},
            "base_exec": {"median_h": base_median, "sigma": s_base},
            "repair_exec": {"median_h": repair_median, "sigma": s_repair},
        },
    }


def category_mix() -> dict[str, float]:
    from gatework.stats.dataset import RELEASED_DISTRIBUTION

    return {f"{area}/{category}": count for (area, category), count in RELEASED_DISTRIBUTION.items()}


def build_config() -> dict:
    quality = solve_quality_ladders()
    times = solve_time_params(quality)
    counts = derive()
    ai = counts["ai_agent"]["Overall"]
    human = counts["marketplace_human"]["Overall"]

    return {
        "regime": "hybrid",
        "n_tasks": 10000,
        "seed": 20260809,
        "category_mix": category_mix(),
        "worker_models": {
            "ai": {
                "quality_weights": {"Good": ai["Good"], "Mediocre": ai["Mediocre"], "Bad": ai["Bad"]},
                "decline_prob": ai["Decline"] / N,
                "connect": {"median_h": 0.0, "sigma": 0.0},
                "exec": {"median_h": 0.13, "sigma": round(sigma_from_median_mean(0.13, 0.2), 6)},
                "cost": {"fixed_usd": 0.0, "per_hour_usd": 1.0},
            },
            "expert": {
                "quality_weights": {"Good": human["Good"], "Mediocre": human["Mediocre"], "Bad": human["Bad"]},
                "decline_prob": 0.0,
                "connect": {"median_h": 4.6, "sigma": round(times["human"]["connect_sigma"], 6)},
                "exec": {"median_h": 26.8, "sigma": round(times["human"]["exec_sigma"], 6)},
                "cost": {"fixed_usd": 50.0, "per_hour_usd": 0.0},
            },
        },
        "hybrid": {
            **times["hybrid"],
            "extra_escalation_prob": quality["extra_escalation_prob"],
            "gate_ladder": quality["gate_ladder"],
            "escalation_ladder": quality["escalation_ladder"],
            "ai_rate_usd_h": 1.0,
            "expert_rate_usd_h": 15.0,
            "gate_review_h": 0.4,
        },
        "gate_policy": {"max_rework": 2},
        "qa": {"consistency_threshold": 0.7},
    }


def verify(config_dict: dict) -> None:
    from gatework.quality import Grade
    from gatework.sim.config import parse_sim_config
    from gatework.sim.engine import run_simulation

    config = parse_sim_config(config_dict)
    hybrid = run_simulation(config.with_overrides(n_tasks=20000, seed=5150))
    human = run_simulation(config.with_overrides(regime="human_only", n_tasks=20000, seed=5150))
    good = sum(r.quality is Grade.GOOD for r in hybrid) / len(hybrid)
    decline = sum(r.quality is Grade.DECLINE for r in hybrid) / len(hybrid)
    med_h = float(np.median([r.total_h for r in hybrid]))
    med_x = float(np.median([r.total_h for r in human]))
    print(f"engine check: Good {good:.4f} (target 0.7447), Decline {decline:.4f} (target 0.0106)")
    print(f"engine check: median ratio {med_h / med_x:.4f} (target 0.47)")
    assert abs(good - 70 / 94) < 0.015
    assert abs(med_h / med_x - TARGET_RATIO) < 0.02


def main() -> None:
    config = build_config()
    verify(config)
    OUT.write_text(json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
