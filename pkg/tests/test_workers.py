"""Worker adapters: bid selection, synthetic sampling laws, handle contracts."""

from __future__ import annotations

import io
import json
import math

import numpy as np
import pytest

from gatework.errors import NoAcceptableBid, SkillMismatch, WorkerUnavailable
from gatework.quality import Grade
from gatework.workers import (
    Bid,
    ConsoleHumanWorker,
    ExecutionContext,
    LognormalSpec,
    ScriptedWorker,
    StepOutput,
    SyntheticWorker,
    SyntheticWorkerModel,
    WorkerKind,
    WorkerProfile,
    load_worker_pool,
    marketplace_select,
    perform_step,
    sample_outcome,
    substream,
)
from gatework.orchestration.plan import PlanStep


def profile(wid="w1", kind=WorkerKind.AI, skills=("web_research",), rate=1.0, speed=1.0) -> WorkerProfile:
    return WorkerProfile(worker_id=wid, kind=kind, skills=frozenset(skills), cost_rate=rate, speed_factor=speed)


def step(index=0, skills=("web_research",), risk="low", gated=False) -> PlanStep:
    return PlanStep(index=index, description="gather data", required_skills=frozenset(skills), risk=risk, gated=gated)


def model(good=0.745, med=0.170, bad=0.085, decline=0.0, connect=(1.0, 0.0), exec_=(2.0, 0.0), fixed=0.0, per_h=1.0):
    return SyntheticWorkerModel(
        quality_dist=(good, med, bad),
        decline_prob=decline,
        connect_time_dist=LognormalSpec(*connect),
        exec_time_dist=LognormalSpec(*exec_),
        cost_fixed_usd=fixed,
        cost_per_hour_usd=per_h,
    )


# --- marketplace_select --------------------------------------------------


def bid(price, success, wid="b", newcomer=False) -> Bid:
    return Bid(bidder=profile(wid=f"{wid}-{price}-{success}"), price=price, job_success=success, is_newcomer=newcomer)


def test_marketplace_lowest_acceptable_offer():
    chosen = marketplace_select([bid(30, 0.85), bid(25, 0.60), bid(40, 0.95)])
    assert chosen.price == 30


def test_marketplace_single_bid():
    assert marketplace_select([bid(50, 0.9)]).price == 50


def test_marketplace_no_acceptable():
    with pytest.raises(NoAcceptableBid):
        marketplace_select([bid(10, 0.5), bid(20, 0.79)])
    with pytest.raises(NoAcceptableBid):
        marketplace_select([])


def test_marketplace_newcomer_bypasses_success_bar():
    chosen = marketplace_select([bid(30, 0.85), bid(12, 0.0, newcomer=True)])
    assert chosen.price == 12 and chosen.is_newcomer


def test_marketplace_tie_breaks_on_success_then_id():
    a = Bid(bidder=profile(wid="alpha"), price=20, job_success=0.82)
    b = Bid(bidder=profile(wid="beta"), price=20, job_success=0.97)
    assert marketplace_select([a, b]) is b
    c = Bid(bidder=profile(wid="gamma"), price=20, job_success=0.97)
    assert marketplace_select([c, b]) is b  # id ascending


def test_marketplace_never_returns_low_success_non_newcomer():
    rng = np.random.default_rng(5)
    for _ in range(200):
        bids = [
            bid(float(rng.integers(5, 80)), float(rng.random()), wid=f"w{i}", newcomer=bool(rng.random() < 0.15))
            for i in range(rng.integers(1, 8))
        ]
        try:
            chosen = marketplace_select(bids)
        except NoAcceptableBid:
            continue
        assert chosen.job_success >= 0.80 or chosen.is_newcomer
        oracle = sorted(
            (b for b in bids if b.job_success >= 0.80 or b.is_newcomer),
            key=lambda b: (b.price, -b.job_success, b.bidder.worker_id),
        )[0]
        assert chosen == oracle


# --- synthetic sampling ----------------------------------------------------


def test_decline_prob_one_always_declines():
    rng = substream(0, 0)
    for _ in range(50):
        outcome = sample_outcome(model(decline=1.0), rng)
        assert outcome.declined and outcome.quality is Grade.DECLINE
        assert outcome.exec_h == 0.0 and outcome.cost_usd == 0.0


def test_degenerate_dists_give_exact_values():
    rng = substream(1, 0)
    outcome = sample_outcome(model(good=1.0, med=0.0, bad=0.0, connect=(1.0, 0.0), exec_=(2.0, 0.0), fixed=4.0, per_h=3.0), rng)
    assert outcome.quality is Grade.GOOD
    assert outcome.connect_h == 1.0
    assert outcome.exec_h == 2.0
    assert outcome.cost_usd == 4.0 + 3.0 * 2.0


def test_seed_determinism():
    m = model(decline=0.05, connect=(2.6, 1.1), exec_=(10.5, 0.9))
    a = [sample_outcome(m, substream(42, i)) for i in range(100)]
    b = [sample_outcome(m, substream(42, i)) for i in range(100)]
    assert a == b
    c = [sample_outcome(m, substream(43, i)) for i in range(100)]
    assert a != c


def test_fixed_draw_count_keeps_streams_aligned():
    # a declined outcome must consume as many draws as a completed one
    m_decline = model(decline=1.0)
    m_normal = model(decline=0.0)
    rng1, rng2 = substream(7, 1), substream(7, 1)
    sample_outcome(m_decline, rng1)
    sample_outcome(m_normal, rng2)
    assert rng1.random() == rng2.random()


def test_empirical_good_share_lln():
    m = model(good=0.745, med=0.170, bad=0.085, decline=0.011)
    rng = substream(20260809, 0)
    outcomes = [sample_outcome(m, rng) for _ in range(100_000)]
    completed = [o for o in outcomes if not o.declined]
    good_share = sum(o.quality is Grade.GOOD for o in completed) / len(completed)
    assert abs(good_share - 0.745) < 0.005  # +/- 0.5 pp
    decline_share = 1 - len(completed) / len(outcomes)
    assert abs(decline_share - 0.011) < 0.003


def test_lognormal_mean_convergence():
    spec = LognormalSpec(median_h=10.5, sigma=0.9)
    m = model(exec_=(10.5, 0.9))
    rng = substream(99, 0)
    n = 100_000
    values = [sample_outcome(m, rng).exec_h for _ in range(n)]
    mean = sum(values) / n
    expected = spec.mean_h  # median * exp(sigma^2/2)
    se = expected * math.sqrt(math.exp(spec.sigma**2) - 1.0) / math.sqrt(n)
    assert abs(mean - expected) < 3 * se


def test_outcomes_non_negative():
    m = model(decline=0.2, connect=(2.6, 1.5), exec_=(26.8, 0.8), fixed=1.0, per_h=2.0)
    rng = substream(3, 0)
    for _ in range(2000):
        o = sample_outcome(m, rng)
        assert o.connect_h >= 0 and o.exec_h >= 0 and o.cost_usd >= 0
        if o.declined:
            assert o.exec_h == 0.0


def test_model_validation():
    with pytest.raises(ValueError):
        model(good=0.5, med=0.5, bad=0.5)
    with pytest.raises(ValueError):
        SyntheticWorkerModel.from_dict(
            {"quality_weights": {"Good": -1}, "connect": {"median_h": 0}, "exec": {"median_h": 0}}
        )
    m = SyntheticWorkerModel.from_dict(
        {
            "quality_weights": {"Good": 404, "Mediocre": 191, "Bad": 362},
            "decline_prob": 0.043,
            "connect": {"median_h": 0.0, "sigma": 0.0},
            "exec": {"median_h": 0.13, "sigma": 0.93},
            "cost": {"per_hour_usd": 1.0},
        }
    )
    assert abs(sum(m.quality_dist) - 1.0) <= 1e-9
    assert SyntheticWorkerModel.from_dict(m.to_dict()) == m


# --- handles -----------------------------------------------------------------


def test_scripted_worker_returns_fixture_verbatim():
    out = StepOutput(summary="done", answer="42", elapsed_h=0.5, cost_usd=1.0)
    worker = ScriptedWorker(profile(), {("T1", 0): out})
    assert perform_step(worker, step(), ExecutionContext("T1")) is out


def test_scripted_worker_missing_fixture():
    worker = ScriptedWorker(profile(), {})
    with pytest.raises(WorkerUnavailable):
        perform_step(worker, step(), ExecutionContext("T1"))


def test_scripted_worker_cycles_list_fixtures():
    outs = [StepOutput(summary="a", answer="1"), StepOutput(summary="b", answer="2")]
    worker = ScriptedWorker(profile(), {("T1", 0): outs})
    answers = [perform_step(worker, step(), ExecutionContext("T1")).answer for _ in range(4)]
    assert answers == ["1", "2", "1", "2"]


def test_scripted_worker_from_dir(tmp_path):
    d = tmp_path / "T9" / "0"
    d.mkdir(parents=True)
    (d / "output.json").write_text(json.dumps({"summary": "from disk", "answer": "x", "elapsed_h": 1.5}))
    worker = ScriptedWorker.from_dir(profile(), tmp_path)
    out = perform_step(worker, step(), ExecutionContext("T9"))
    assert out.summary == "from disk" and out.elapsed_h == 1.5


def test_skill_mismatch():
    worker = ScriptedWorker(profile(skills=("writing",)), {("T1", 0): StepOutput(summary="s")})
    with pytest.raises(SkillMismatch):
        perform_step(worker, step(skills=("web_research",)), ExecutionContext("T1"))


def test_synthetic_worker_deterministic_across_runs():
    m = model(connect=(1.0, 0.5), exec_=(2.0, 0.5))
    out1 = perform_step(SyntheticWorker(profile(), m, substream(5, 0)), step(), ExecutionContext("T1"))
    out2 = perform_step(SyntheticWorker(profile(), m, substream(5, 0)), step(), ExecutionContext("T1"))
    assert out1 == out2


def test_synthetic_worker_decline_raises():
    worker = SyntheticWorker(profile(), model(decline=1.0), substream(6, 0))
    with pytest.raises(WorkerUnavailable):
        perform_step(worker, step(), ExecutionContext("T1"))
    assert worker.last_outcome is not None and worker.last_outcome.declined


def test_console_human_worker_reads_stdio():
    stdin = io.StringIO("cleaned the dataset\n2.5\n")
    stdout = io.StringIO()
    worker = ConsoleHumanWorker(profile(kind=WorkerKind.EXPERT, rate=15.0), stdin=stdin, stdout=stdout)
    out = perform_step(worker, step(), ExecutionContext("T1"))
    assert out.summary == "cleaned the dataset"
    assert out.elapsed_h == 2.5
    assert out.cost_usd == pytest.approx(37.5)
    assert "step 0" in stdout.getvalue()


def test_worker_pool_round_trip(tmp_path):
    pool = [profile("a", WorkerKind.AI), profile("x", WorkerKind.EXPERT, skills=("analysis",), rate=15)]
    path = tmp_path / "pool.json"
    path.write_text(json.dumps({"workers": [p.to_dict() for p in pool]}))
    assert load_worker_pool(path) == pool


def test_pool_file_with_model_blocks(tmp_path):
    raw = {
        "workers": [profile("a", WorkerKind.AI).to_dict()],
        "models": {
            "expert": {
                "quality_weights": {"Good": 50, "Mediocre": 24, "Bad": 20},
                "decline_prob": 0.0,
                "connect": {"median_h": 4.6, "sigma": 1.5},
                "exec": {"median_h": 26.8, "sigma": 0.85},
                "cost": {"fixed_usd": 50.0},
            }
        },
    }
    path = tmp_path / "pool.json"
    path.write_text(json.dumps(raw))
    from gatework.workers.profiles import load_pool_file

    profiles, models = load_pool_file(path)
    assert profiles == [profile("a", WorkerKind.AI)]
    assert models["expert"].connect_time_dist.median_h == 4.6


def test_scripted_worker_default_task_fallback():
    out_specific = StepOutput(summary="for T1", answer="specific")
    out_default = StepOutput(summary="generic", answer="default")
    worker = ScriptedWorker(profile(), {("T1", 0): out_specific, ("default", 0): out_default})
    assert perform_step(worker, step(), ExecutionContext("T1")).answer == "specific"
    assert perform_step(worker, step(), ExecutionContext("T-generated-9")).answer == "default"
    with pytest.raises(WorkerUnavailable):
        perform_step(worker, step(index=1, skills=("web_research",)), ExecutionContext("T1"))
