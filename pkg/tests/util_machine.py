"""Independent oracle for the lifecycle machine, plus sequence generators.

The oracle folds its own copy of the transition table with its own guard
bookkeeping; it deliberately does not import the production table so the
two can disagree if either is wrong.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from gatework.core.types import Actor, AuditEvent, EventKind

E = EventKind

# (phase name, kind) -> successor phase name; the enumerated workflow closure.
ORACLE_TABLE: dict[tuple[str, EventKind], str] = {
    ("submitted", E.TASK_SUBMITTED): "submitted",
    ("submitted", E.CLARIFICATION_STARTED): "clarifying",
    ("submitted", E.TASK_DECLINED): "declined",
    ("clarifying", E.CLARIFICATION_ROUND_COMPLETED): "clarifying",
    ("clarifying", E.PLANNING_STARTED): "planning",
    ("clarifying", E.TASK_DECLINED): "declined",
    ("planning", E.PLAN_COMMITTED): "routing",
    ("planning", E.TASK_DECLINED): "declined",
    ("routing", E.WORKER_ASSIGNED): "executing",
    ("routing", E.TASK_DECLINED): "declined",
    ("executing", E.WORKER_ASSIGNED): "executing",
    ("executing", E.STEP_STARTED): "executing",
    ("executing", E.STEP_COMPLETED): "executing",
    ("executing", E.GATE_REQUESTED): "executing",
    ("executing", E.GATE_APPROVED): "executing",
    ("executing", E.GATE_REJECTED): "executing",
    ("executing", E.GATE_EDITED): "executing",
    ("executing", E.ESCALATION_RAISED): "executing",
    ("executing", E.DELIVERABLE_RECORDED): "executing",
    ("executing", E.ONLINE_QA_STARTED): "online_qa",
    ("executing", E.OFFLINE_QA_STARTED): "offline_qa",
    ("online_qa", E.ONLINE_QA_PASSED): "executing",
    ("online_qa", E.ONLINE_QA_FAILED): "executing",
    ("online_qa", E.DELIVERABLE_RECORDED): "online_qa",
    ("online_qa", E.OFFLINE_QA_STARTED): "offline_qa",
    ("offline_qa", E.QA_PASSED): "finalized",
    ("offline_qa", E.QA_FAILED_REWORK): "rework",
    ("offline_qa", E.QA_ESCALATED_TO_HUMAN): "offline_qa",
    ("rework", E.REWORK_STARTED): "executing",
}

TERMINAL = {"finalized", "declined"}
MAX_CLARIFY = 3


@dataclass(frozen=True)
class OracleState:
    phase: str = "submitted"
    version: int = 0
    clarify_rounds: int = 0
    gated: tuple[bool, ...] = ()
    done: frozenset[int] = frozenset()
    approved: frozenset[int] = frozenset()
    pending: frozenset[int] = frozenset()
    qa_escalated: bool = False


def oracle_apply(s: OracleState, kind: EventKind, payload: dict) -> OracleState:
    """Fold one event; raises ValueError if the oracle deems it illegal."""
    if s.phase in TERMINAL:
        raise ValueError("terminal")
    key = (s.phase, kind)
    if key not in ORACLE_TABLE:
        raise ValueError("kind not in table for phase")
    nxt = ORACLE_TABLE[key]
    ch: dict = {"phase": nxt, "version": s.version + 1}
    i = payload.get("step_index")

    if kind is E.TASK_SUBMITTED and s.version != 0:
        raise ValueError("late submit")
    elif kind is E.CLARIFICATION_ROUND_COMPLETED:
        if s.clarify_rounds >= MAX_CLARIFY:
            raise ValueError("clarify cap")
        ch["clarify_rounds"] = s.clarify_rounds + 1
    elif kind is E.PLAN_COMMITTED:
        steps = payload.get("steps") or []
        if not steps:
            raise ValueError("empty plan")
        for pos, st in enumerate(steps):
            if st.get("index") != pos:
                raise ValueError("bad indices")
            if st.get("risk") == "high" and not st.get("gated"):
                raise ValueError("ungated high risk")
        ch["gated"] = tuple(bool(st.get("gated")) for st in steps)
        ch["done"] = ch["approved"] = ch["pending"] = frozenset()
    elif kind is E.WORKER_ASSIGNED:
        if payload.get("role") not in ("ai_worker", "expert", "qa_expert") or not payload.get("worker_id"):
            raise ValueError("bad assignment")
    elif kind is E.STEP_STARTED:
        if i is None or not (0 <= i < len(s.gated)):
            raise ValueError("bad step")
    elif kind is E.STEP_COMPLETED:
        if i is None or not (0 <= i < len(s.gated)) or i in s.done:
            raise ValueError("bad step")
        if s.gated[i] and i not in s.approved:
            raise ValueError("unapproved gated step")
        ch["done"] = s.done | {i}
        ch["approved"] = s.approved - {i}
    elif kind is E.GATE_REQUESTED:
        if i is None or not (0 <= i < len(s.gated)) or not s.gated[i]:
            raise ValueError("not gated")
        if i in s.pending or i in s.approved or i in s.done:
            raise ValueError("gate not requestable")
        ch["pending"] = s.pending | {i}
    elif kind in (E.GATE_APPROVED, E.GATE_EDITED):
        if i is None or i not in s.pending:
            raise ValueError("no pending gate")
        ch["pending"] = s.pending - {i}
        ch["approved"] = s.approved | {i}
    elif kind is E.GATE_REJECTED:
        if i is None or i not in s.pending:
            raise ValueError("no pending gate")
        ch["pending"] = s.pending - {i}
        ch["approved"] = s.approved - {i}
        ch["done"] = s.done - {i}
    elif kind is E.ESCALATION_RAISED:
        if payload.get("reason") not in (
            "conflicting_sources",
            "failed_checks",
            "high_risk_step",
            "low_self_consistency",
        ):
            raise ValueError("bad reason")
    elif kind is E.ONLINE_QA_FAILED:
        if i is not None:
            if not (0 <= i < len(s.gated)):
                raise ValueError("bad step")
            ch["done"] = s.done - {i}
            ch["approved"] = s.approved - {i}
    elif kind is E.QA_ESCALATED_TO_HUMAN:
        if s.qa_escalated:
            raise ValueError("already escalated")
        ch["qa_escalated"] = True
    elif kind in (E.QA_PASSED, E.QA_FAILED_REWORK):
        ch["qa_escalated"] = False
        if kind is E.QA_FAILED_REWORK:
            steps = payload.get("rework_steps", [])
            if any(not (0 <= j < len(s.gated)) for j in steps):
                raise ValueError("bad rework steps")
            ch["done"] = s.done - set(steps)
            ch["approved"] = s.approved - set(steps)

    return replace(s, **ch)


def legal_options(s: OracleState, rng: random.Random) -> list[tuple[EventKind, dict]]:
    """All (kind, payload) choices the oracle would accept from this state."""
    opts: list[tuple[EventKind, dict]] = []
    if s.phase in TERMINAL:
        return opts
    n = len(s.gated)
    for (phase, kind), _nxt in ORACLE_TABLE.items():
        if phase != s.phase:
            continue
        if kind is E.TASK_SUBMITTED:
            if s.version == 0:
                opts.append((kind, {"brief_digest": "d"}))
        elif kind is E.CLARIFICATION_ROUND_COMPLETED:
            if s.clarify_rounds < MAX_CLARIFY:
                opts.append((kind, {"questions": 1}))
        elif kind is E.PLAN_COMMITTED:
            k = rng.randint(1, 4)
            steps = []
            for pos in range(k):
                risk = rng.choice(["low", "medium", "high"])
                gated = True if risk == "high" else rng.random() < 0.4
                steps.append({"index": pos, "gated": gated, "risk": risk, "description": f"s{pos}"})
            opts.append((kind, {"steps": steps}))
        elif kind is E.WORKER_ASSIGNED:
            opts.append((kind, {"role": rng.choice(["ai_worker", "expert"]), "worker_id": f"w{rng.randint(1, 5)}"}))
        elif kind is E.STEP_STARTED:
            if n:
                opts.append((kind, {"step_index": rng.randrange(n)}))
        elif kind is E.STEP_COMPLETED:
            ok = [i for i in range(n) if i not in s.done and (not s.gated[i] or i in s.approved)]
            if ok:
                opts.append((kind, {"step_index": rng.choice(ok)}))
        elif kind is E.GATE_REQUESTED:
            ok = [
                i
                for i in range(n)
                if s.gated[i] and i not in s.pending and i not in s.approved and i not in s.done
            ]
            if ok:
                opts.append((kind, {"step_index": rng.choice(ok)}))
        elif kind in (E.GATE_APPROVED, E.GATE_REJECTED, E.GATE_EDITED):
            if s.pending:
                payload: dict = {"step_index": rng.choice(sorted(s.pending))}
                if kind is E.GATE_EDITED:
                    payload["new_description"] = "edited"
                if kind is E.GATE_REJECTED:
                    payload["notes"] = "redo"
                opts.append((kind, payload))
        elif kind is E.ESCALATION_RAISED:
            opts.append((kind, {"reason": rng.choice(["failed_checks", "high_risk_step"])}))
        elif kind is E.ONLINE_QA_FAILED:
            payload = {}
            if n and rng.random() < 0.7:
                payload["step_index"] = rng.randrange(n)
            opts.append((kind, payload))
        elif kind is E.QA_FAILED_REWORK:
            payload = {}
            if n and rng.random() < 0.7:
                payload["rework_steps"] = sorted(rng.sample(range(n), rng.randint(1, n)))
            opts.append((kind, payload))
        elif kind is E.QA_ESCALATED_TO_HUMAN:
            if not s.qa_escalated:
                opts.append((kind, {}))
        else:
            opts.append((kind, {}))
    return opts


def illegal_options(s: OracleState, rng: random.Random) -> list[tuple[EventKind, dict]]:
    """A sample of (kind, payload) choices the oracle would reject."""
    opts: list[tuple[EventKind, dict]] = []
    n = len(s.gated)
    legal_kinds = {k for (p, k) in ORACLE_TABLE if p == s.phase} if s.phase not in TERMINAL else set()
    for kind in E:
        if kind not in legal_kinds:
            opts.append((kind, {"step_index": 0}))
    if s.phase not in TERMINAL:
        if E.STEP_COMPLETED in legal_kinds:
            blocked = [i for i in range(n) if s.gated[i] and i not in s.approved and i not in s.done]
            if blocked:
                opts.append((E.STEP_COMPLETED, {"step_index": rng.choice(blocked)}))
            if s.done:
                opts.append((E.STEP_COMPLETED, {"step_index": rng.choice(sorted(s.done))}))
            opts.append((E.STEP_COMPLETED, {"step_index": n + 3}))
        if E.GATE_APPROVED in legal_kinds:
            free = [i for i in range(n) if i not in s.pending]
            if free:
                opts.append((E.GATE_APPROVED, {"step_index": rng.choice(free)}))
        if E.PLAN_COMMITTED in legal_kinds:
            opts.append((E.PLAN_COMMITTED, {"steps": []}))
            opts.append((E.PLAN_COMMITTED, {"steps": [{"index": 0, "risk": "high", "gated": False}]}))
        if E.CLARIFICATION_ROUND_COMPLETED in legal_kinds and s.clarify_rounds >= MAX_CLARIFY:
            opts.append((E.CLARIFICATION_ROUND_COMPLETED, {}))
        if E.TASK_SUBMITTED in legal_kinds and s.version != 0:
            opts.append((E.TASK_SUBMITTED, {}))
    return opts


ACTOR_CYCLE = [Actor.SYSTEM, Actor.AI_WORKER, Actor.EXPERT, Actor.QA_EXPERT, Actor.CLIENT]


def make_event(seq: int, kind: EventKind, payload: dict, wall_time: int | None = None) -> AuditEvent:
    return AuditEvent(
        seq=seq,
        wall_time=wall_time if wall_time is not None else seq * 1000,
        actor=ACTOR_CYCLE[seq % len(ACTOR_CYCLE)],
        kind=kind,
        payload=payload,
    )


def generate_legal_sequence(seed: int, length: int) -> tuple[list[AuditEvent], OracleState]:
    """A random legal event sequence and the oracle's final state."""
    rng = random.Random(seed)
    s = OracleState()
    events: list[AuditEvent] = []
    for seq in range(length):
        opts = legal_options(s, rng)
        if not opts:
            break
        kind, payload = rng.choice(opts)
        events.append(make_event(seq, kind, payload))
        s = oracle_apply(s, kind, payload)
    return events, s
