"""Deterministic regime simulator.

Each task derives its own RNG substream from (seed, task index), so results
are a pure function of (config, seed) no matter how many parallel drivers
split the work. Draw budget per task is fixed: 1 uniform for the category,
4 draws for the primary worker outcome, and (hybrid only) 5 more for
escalation, repair, and the hybrid time components.

Every simulated task also replays a full audit-event lifecycle through the
state machine, which enforces gate ordering and regime purity by
construction: ai_only logs never contain expert or QA-expert actors,
human_only logs never contain the AI actor.

Hybrid quality is two-stage: an AI-stage draw, then a repair draw from the
escalation ladder (expert redo after a failed/uncertain step) or the gate
ladder (expert review at step gates) per the escalation outcome. A task
whose AI stage declined is rescued by an expert unless the escalation
ladder's Decline row keeps it declined; unrescued declines never reach
execution, carry zero execution time and price, and count no escalations.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from gatework.core.log import AuditLog, append
from gatework.core.machine import apply_event, initial_state
from gatework.core.types import Actor, AuditEvent, EventKind
from gatework.data import TEMPLATES_FILE, data_path
from gatework.errors import ConfigInvalid
from gatework.orchestration.plan import TemplateLibrary
from gatework.quality import Grade
from gatework.rng import substream
from gatework.sim.config import PRIMARY_MODEL, HybridParams, Regime, SimConfig, draw_from_row
from gatework.workers.synthetic import sample_outcome

E = EventKind

MS_PER_HOUR = 3_600_000


@dataclass(frozen=True)
class SimRecord:
    task_id: str
    regime: Regime
    quality: Grade
    connect_h: float
    exec_h: float
    total_h: float
    price_usd: float
    n_escalations: int
    n_reworks: int

    def __post_init__(self):
        if self.total_h != self.connect_h + self.exec_h:
            raise ValueError("total_h must equal connect_h + exec_h exactly")
        if self.price_usd < 0:
            raise ValueError("price_usd must be >= 0")
        if self.quality is Grade.DECLINE and self.exec_h != 0.0:
            raise ValueError("declined tasks carry zero execution time")

    def to_dict(self) -> dict[str, Any]:
        # times at 0.01 h, money at cents; full precision stays internal
        return {
            "task_id": self.task_id,
            "regime": self.regime.value,
            "quality": self.quality.value,
            "connect_h": round(self.connect_h, 2),
            "exec_h": round(self.exec_h, 2),
            "total_h": round(self.total_h, 2),
            "price_usd": round(self.price_usd, 2),
            "n_escalations": self.n_escalations,
            "n_reworks": self.n_reworks,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


class _Emitter:
    """Builds one task's audit log through the machine, clock non-decreasing."""

    def __init__(self):
        self.log = AuditLog()
        self.state = initial_state()
        self._last_ms = 0

    def emit(self, hours: float, kind: EventKind, actor: Actor, payload: dict | None = None) -> None:
        t_ms = max(int(round(hours * MS_PER_HOUR)), self._last_ms)
        self._last_ms = t_ms
        event = AuditEvent(seq=len(self.log), wall_time=t_ms, actor=actor, kind=kind, payload=payload or {})
        self.state = apply_event(self.state, event)
        self.log = append(self.log, event)


def _pick_category(config: SimConfig, u: float) -> tuple[str, str]:
    edge = 0.0
    for cell, p in config.category_mix:
        edge += p
        if u < edge:
            return cell
    return config.category_mix[-1][0]


def _plan_payload(category: str, templates: TemplateLibrary) -> tuple[dict, int, list[float]]:
    steps = templates.lookup(category)
    if steps is None:
        raise ConfigInvalid(f"no template (or generic fallback) for category {category!r}")
    payload = {
        "steps": [
            {
                "index": pos,
                "description": t["description"],
                "skills": t["skills"],
                "risk": t["risk"],
                "gated": t["gated"],
                "base_hours": t["base_hours"],
            }
            for pos, t in enumerate(steps)
        ],
        "created_from": f"sim:{category}",
        "revision": 0,
    }
    n_gated = sum(1 for t in steps if t["gated"])
    base_hours = [t["base_hours"] for t in steps]
    return payload, n_gated, base_hours


def _intake(em: _Emitter, connect_h: float, worker_actor: Actor, plan_payload: dict) -> None:
    em.emit(0.0, E.TASK_SUBMITTED, Actor.CLIENT, {"schema": 1})
    em.emit(0.25 * connect_h, E.CLARIFICATION_STARTED, worker_actor, {})
    em.emit(0.5 * connect_h, E.PLANNING_STARTED, worker_actor, {})
    em.emit(0.6 * connect_h, E.PLAN_COMMITTED, worker_actor, plan_payload)


def _execute_steps(
    em: _Emitter,
    plan_payload: dict,
    start_h: float,
    exec_h: float,
    base_hours: list[float],
    worker_actor: Actor,
    approver: Actor,
    worker_id: str,
) -> None:
    total_base = sum(base_hours) or 1.0
    t = start_h
    for step in plan_payload["steps"]:
        i = step["index"]
        slice_h = exec_h * base_hours[i] / total_base
        if step["gated"]:
            em.emit(t, E.GATE_REQUESTED, Actor.SYSTEM, {"step_index": i, "risk": step["risk"]})
            em.emit(t, E.GATE_APPROVED, approver, {"step_index": i, "decided_by": worker_id})
        em.emit(t, E.STEP_STARTED, worker_actor, {"step_index": i, "worker_id": worker_id})
        t += slice_h
        em.emit(t, E.STEP_COMPLETED, worker_actor, {"step_index": i, "worker_id": worker_id, "elapsed_h": slice_h})


def _simulate_task(config: SimConfig, templates: TemplateLibrary, index: int) -> tuple[SimRecord, AuditLog]:
    rng = substream(config.seed, index)
    task_id = f"sim-{index:06d}"
    area_category = _pick_category(config, rng.random())
    plan_payload, n_gated, base_hours = _plan_payload(area_category[1], templates)

    primary_model = config.worker_models[PRIMARY_MODEL[config.regime]]
    outcome = sample_outcome(primary_model, rng)

    if config.regime is Regime.HYBRID:
        return _hybrid_task(config, task_id, plan_payload, n_gated, base_hours, outcome, rng)
    return _single_regime_task(config, task_id, plan_payload, base_hours, outcome)


def _single_regime_task(
    config: SimConfig, task_id: str, plan_payload: dict, base_hours: list[float], outcome
) -> tuple[SimRecord, AuditLog]:
    ai = config.regime is Regime.AI_ONLY
    worker_actor = Actor.AI_WORKER if ai else Actor.EXPERT
    approver = Actor.SYSTEM if ai else Actor.EXPERT
    qa_actor = Actor.SYSTEM if ai else Actor.QA_EXPERT
    worker_id = "agent-0" if ai else "expert-0"
    role = "ai_worker" if ai else "expert"

    em = _Emitter()
    _intake(em, outcome.connect_h, worker_actor, plan_payload)
    if outcome.declined:
        em.emit(outcome.connect_h, E.TASK_DECLINED, Actor.SYSTEM, {"note": "worker declined the task"})
        record = SimRecord(
            task_id=task_id,
            regime=config.regime,
            quality=Grade.DECLINE,
            connect_h=outcome.connect_h,
            exec_h=0.0,
            total_h=outcome.connect_h + 0.0,
            price_usd=0.0,
            n_escalations=0,
            n_reworks=0,
        )
        return record, em.log

    em.emit(outcome.connect_h, E.WORKER_ASSIGNED, Actor.SYSTEM, {"role": role, "worker_id": worker_id})
    _execute_steps(em, plan_payload, outcome.connect_h, outcome.exec_h, base_hours, worker_actor, approver, worker_id)
    end = outcome.connect_h + outcome.exec_h
    em.emit(end, E.ONLINE_QA_STARTED, Actor.SYSTEM, {})
    em.emit(end, E.ONLINE_QA_PASSED, Actor.SYSTEM, {})
    em.emit(end, E.OFFLINE_QA_STARTED, Actor.SYSTEM, {})
    em.emit(end, E.QA_PASSED, qa_actor, {})

    record = SimRecord(
        task_id=task_id,
        regime=config.regime,
        quality=outcome.quality,
        connect_h=outcome.connect_h,
        exec_h=outcome.exec_h,
        total_h=outcome.connect_h + outcome.exec_h,
        price_usd=outcome.cost_usd,
        n_escalations=0,
        n_reworks=0,
    )
    return record, em.log


def _hybrid_task(
    config: SimConfig,
    task_id: str,
    plan_payload: dict,
    n_gated: int,
    base_hours: list[float],
    ai_outcome,
    rng: np.random.Generator,
) -> tuple[SimRecord, AuditLog]:
    hp: HybridParams = config.hybrid  # validated non-None by SimConfig
    u_escalate = rng.random()
    u_repair = rng.random()
    z_connect = rng.standard_normal()
    z_base = rng.standard_normal()
    z_repair = rng.standard_normal()

    ai_label = Grade.DECLINE if ai_outcome.declined else ai_outcome.quality
    escalated = ai_outcome.declined or ai_label is Grade.BAD or u_escalate < hp.extra_escalation_prob
    if escalated:
        final = draw_from_row(hp.escalation_ladder[ai_label], u_repair)
    elif n_gated:
        final = draw_from_row(hp.gate_ladder[ai_label], u_repair)
    else:
        final = ai_label

    connect_h = hp.connect.sample(z_connect)
    em = _Emitter()
    _intake(em, connect_h, Actor.AI_WORKER, plan_payload)

    if final is Grade.DECLINE:
        # AI declined and no expert rescue: never reaches execution
        em.emit(connect_h, E.TASK_DECLINED, Actor.SYSTEM, {"note": "declined; no qualified rescue"})
        record = SimRecord(
            task_id=task_id,
            regime=Regime.HYBRID,
            quality=Grade.DECLINE,
            connect_h=connect_h,
            exec_h=0.0,
            total_h=connect_h + 0.0,
            price_usd=0.0,
            n_escalations=0,
            n_reworks=0,
        )
        return record, em.log

    base_h = hp.base_exec.sample(z_base)
    repair_h = hp.repair_exec.sample(z_repair) if escalated else 0.0
    exec_h = base_h + repair_h
    gate_h = hp.gate_review_h * n_gated

    rescued = ai_outcome.declined
    if rescued:
        price = hp.expert_rate_usd_h * (base_h + repair_h + gate_h)
    elif escalated:
        price = hp.ai_rate_usd_h * base_h + hp.expert_rate_usd_h * (repair_h + gate_h)
    else:
        price = hp.ai_rate_usd_h * base_h + hp.expert_rate_usd_h * gate_h

    em.emit(connect_h, E.WORKER_ASSIGNED, Actor.SYSTEM, {"role": "ai_worker", "worker_id": "agent-0"})
    if rescued:
        em.emit(connect_h, E.ESCALATION_RAISED, Actor.SYSTEM, {"reason": "high_risk_step", "detail": "ai declined"})
        em.emit(connect_h, E.WORKER_ASSIGNED, Actor.SYSTEM, {"role": "expert", "worker_id": "expert-0"})
        _execute_steps(
            em, plan_payload, connect_h, exec_h, base_hours, Actor.EXPERT, Actor.EXPERT, "expert-0"
        )
        n_reworks = 0
    else:
        _execute_steps(
            em, plan_payload, connect_h, base_h, base_hours, Actor.AI_WORKER, Actor.EXPERT, "agent-0"
        )
        n_reworks = 0
        if escalated:
            last = plan_payload["steps"][-1]
            t = connect_h + base_h
            reason = "failed_checks" if ai_label is Grade.BAD else "low_self_consistency"
            em.emit(t, E.ONLINE_QA_STARTED, Actor.SYSTEM, {"step_index": last["index"]})
            em.emit(t, E.ONLINE_QA_FAILED, Actor.SYSTEM, {"step_index": last["index"]})
            em.emit(t, E.ESCALATION_RAISED, Actor.SYSTEM, {"reason": reason, "step_index": last["index"]})
            em.emit(t, E.WORKER_ASSIGNED, Actor.SYSTEM, {"role": "expert", "worker_id": "expert-0"})
            if last["gated"]:
                em.emit(t, E.GATE_REQUESTED, Actor.SYSTEM, {"step_index": last["index"]})
                em.emit(t, E.GATE_APPROVED, Actor.EXPERT, {"step_index": last["index"], "decided_by": "expert-0"})
            em.emit(t, E.STEP_STARTED, Actor.EXPERT, {"step_index": last["index"], "worker_id": "expert-0"})
            em.emit(
                t + repair_h,
                E.STEP_COMPLETED,
                Actor.EXPERT,
                {"step_index": last["index"], "worker_id": "expert-0", "elapsed_h": repair_h},
            )
            n_reworks = 1

    end = connect_h + exec_h
    em.emit(end, E.ONLINE_QA_STARTED, Actor.SYSTEM, {})
    em.emit(end, E.ONLINE_QA_PASSED, Actor.SYSTEM, {})
    em.emit(end, E.OFFLINE_QA_STARTED, Actor.SYSTEM, {})
    em.emit(end, E.QA_PASSED, Actor.QA_EXPERT, {})

    record = SimRecord(
        task_id=task_id,
        regime=Regime.HYBRID,
        quality=final,
        connect_h=connect_h,
        exec_h=exec_h,
        total_h=connect_h + exec_h,
        price_usd=price,
        n_escalations=1 if escalated else 0,
        n_reworks=n_reworks,
    )
    return record, em.log


def _run(config: SimConfig, templates: TemplateLibrary, parallel: int, keep_logs: bool):
    indexes = range(config.n_tasks)
    if parallel <= 1:
        results = [_simulate_task(config, templates, i) for i in indexes]
    else:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(lambda i: _simulate_task(config, templates, i), indexes))
    records = [record for record, _ in results]
    logs = {record.task_id: log for record, log in results} if keep_logs else None
    return records, logs


def run_simulation(config: SimConfig, parallel: int = 1) -> list[SimRecord]:
    """Exactly n_tasks records, deterministic in (config, seed)."""
    templates = TemplateLibrary.from_file(data_path(TEMPLATES_FILE))
    records, _ = _run(config, templates, parallel, keep_logs=False)
    return records


def simulate_with_logs(config: SimConfig, parallel: int = 1) -> tuple[list[SimRecord], dict[str, AuditLog]]:
    templates = TemplateLibrary.from_file(data_path(TEMPLATES_FILE))
    records, logs = _run(config, templates, parallel, keep_logs=True)
    return records, logs


def write_records_file(path: str | Path, records: Iterable[SimRecord]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(record.to_json_line())
            f.write("\n")
