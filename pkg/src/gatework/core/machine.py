"""Task lifecycle state machine.

The transition table closes the ordered workflow (submit, clarify, plan,
route, execute, online QA, offline QA, finalize/rework) plus decline from
any pre-execution phase. Step-level events are self-transitions within
Executing; gate ordering is enforced at the payload level: a gated step can
only complete while it holds a live approval, and rework invalidates the
approval.

All functions are pure; ``apply_event`` returns a new state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Mapping

from gatework.errors import IllegalTransition, TerminalState
from gatework.core.types import Actor, AuditEvent, EventKind, Phase, TaskState

E = EventKind
P = Phase

# (phase, kind) -> successor phase. Kinds missing for a phase are illegal there.
TRANSITIONS: dict[tuple[Phase, EventKind], Phase] = {
    (P.SUBMITTED, E.TASK_SUBMITTED): P.SUBMITTED,
    (P.SUBMITTED, E.CLARIFICATION_STARTED): P.CLARIFYING,
    (P.SUBMITTED, E.TASK_DECLINED): P.DECLINED,
    (P.CLARIFYING, E.CLARIFICATION_ROUND_COMPLETED): P.CLARIFYING,
    (P.CLARIFYING, E.PLANNING_STARTED): P.PLANNING,
    (P.CLARIFYING, E.TASK_DECLINED): P.DECLINED,
    (P.PLANNING, E.PLAN_COMMITTED): P.ROUTING,
    (P.PLANNING, E.TASK_DECLINED): P.DECLINED,
    (P.ROUTING, E.WORKER_ASSIGNED): P.EXECUTING,
    (P.ROUTING, E.TASK_DECLINED): P.DECLINED,
    (P.EXECUTING, E.WORKER_ASSIGNED): P.EXECUTING,
    (P.EXECUTING, E.STEP_STARTED): P.EXECUTING,
    (P.EXECUTING, E.STEP_COMPLETED): P.EXECUTING,
    (P.EXECUTING, E.GATE_REQUESTED): P.EXECUTING,
    (P.EXECUTING, E.GATE_APPROVED): P.EXECUTING,
    (P.EXECUTING, E.GATE_REJECTED): P.EXECUTING,
    (P.EXECUTING, E.GATE_EDITED): P.EXECUTING,
    (P.EXECUTING, E.ESCALATION_RAISED): P.EXECUTING,
    (P.EXECUTING, E.DELIVERABLE_RECORDED): P.EXECUTING,
    (P.EXECUTING, E.ONLINE_QA_STARTED): P.ONLINE_QA,
    (P.EXECUTING, E.OFFLINE_QA_STARTED): P.OFFLINE_QA,
    (P.ONLINE_QA, E.ONLINE_QA_PASSED): P.EXECUTING,
    (P.ONLINE_QA, E.ONLINE_QA_FAILED): P.EXECUTING,
    (P.ONLINE_QA, E.DELIVERABLE_RECORDED): P.ONLINE_QA,
    (P.ONLINE_QA, E.OFFLINE_QA_STARTED): P.OFFLINE_QA,
    (P.OFFLINE_QA, E.QA_PASSED): P.FINALIZED,
    (P.OFFLINE_QA, E.QA_FAILED_REWORK): P.REWORK,
    (P.OFFLINE_QA, E.QA_ESCALATED_TO_HUMAN): P.OFFLINE_QA,
    (P.REWORK, E.REWORK_STARTED): P.EXECUTING,
}

ESCALATION_KINDS = frozenset({"conflicting_sources", "failed_checks", "high_risk_step", "low_self_consistency"})

WORKER_ROLES = frozenset({Actor.AI_WORKER.value, Actor.EXPERT.value, Actor.QA_EXPERT.value})


@dataclass(frozen=True)
class MachineConfig:
    """Host-tunable machine limits."""

    max_clarify_rounds: int = 3


DEFAULT_CONFIG = MachineConfig()


def initial_state() -> TaskState:
    return TaskState(phase=Phase.SUBMITTED, version=0)


def _payload_step(payload: Mapping[str, Any], key: str = "step_index") -> int | None:
    v = payload.get(key)
    if v is None:
        return None
    if not isinstance(v, int) or isinstance(v, bool):
        raise IllegalTransition(f"payload field {key!r} must be an integer, got {v!r}")
    return v


def _require_step(state: TaskState, payload: Mapping[str, Any]) -> int:
    i = _payload_step(payload)
    if i is None:
        raise IllegalTransition("event requires a step_index payload field")
    if not (0 <= i < state.n_steps()):
        raise IllegalTransition(f"step_index {i} out of range for {state.n_steps()}-step plan")
    return i


def _check_plan_payload(payload: Mapping[str, Any]) -> tuple[bool, ...]:
    steps = payload.get("steps")
    if not isinstance(steps, (list, tuple)) or not steps:
        raise IllegalTransition("plan_committed payload must carry a non-empty steps list")
    gated: list[bool] = []
    for pos, s in enumerate(steps):
        if not isinstance(s, Mapping):
            raise IllegalTransition("plan step payload entries must be mappings")
        if s.get("index") != pos:
            raise IllegalTransition("plan step indices must be contiguous from 0")
        g = bool(s.get("gated", False))
        if s.get("risk") == "high" and not g:
            raise IllegalTransition(f"high-risk step {pos} must be gated")
        gated.append(g)
    return tuple(gated)


def apply_event(state: TaskState, event: AuditEvent, config: MachineConfig = DEFAULT_CONFIG) -> TaskState:
    """Apply one event, returning the successor state (version + 1).

    Raises:
        TerminalState: the task is already Finalized or Declined.
        IllegalTransition: kind not legal from this phase, or the payload
            violates a guard (gate ordering, clarification cap, ...).
    """
    if state.terminal:
        raise TerminalState(f"no events accepted in terminal phase {state.phase.value}")

    key = (state.phase, event.kind)
    if key not in TRANSITIONS:
        raise IllegalTransition(f"{event.kind.value} is not legal from phase {state.phase.value}")
    next_phase = TRANSITIONS[key]
    payload = event.payload

    changes: dict[str, Any] = {"phase": next_phase, "version": state.version + 1}

    if event.kind is E.TASK_SUBMITTED:
        if state.version != 0:
            raise IllegalTransition("task_submitted is only legal as the first event")

    elif event.kind is E.CLARIFICATION_ROUND_COMPLETED:
        if state.clarify_rounds >= config.max_clarify_rounds:
            raise IllegalTransition(f"clarification capped at {config.max_clarify_rounds} rounds")
        changes["clarify_rounds"] = state.clarify_rounds + 1

    elif event.kind is E.PLAN_COMMITTED:
        changes["step_gated"] = _check_plan_payload(payload)
        changes["steps_done"] = frozenset()
        changes["approved_gates"] = frozenset()
        changes["pending_gates"] = frozenset()

    elif event.kind is E.WORKER_ASSIGNED:
        role = payload.get("role")
        worker_id = payload.get("worker_id")
        if role not in WORKER_ROLES or not isinstance(worker_id, str) or not worker_id:
            raise IllegalTransition("worker_assigned payload needs a known role and a worker_id")
        assigned = dict(state.assigned_workers)
        assigned[role] = worker_id
        changes["assigned_workers"] = tuple(sorted(assigned.items()))

    elif event.kind is E.STEP_STARTED:
        i = _require_step(state, payload)
        changes["current_step"] = i

    elif event.kind is E.STEP_COMPLETED:
        i = _require_step(state, payload)
        if i in state.steps_done:
            raise IllegalTransition(f"step {i} already completed")
        if state.step_gated[i] and i not in state.approved_gates:
            raise IllegalTransition(f"gated step {i} cannot complete without an approval")
        changes["steps_done"] = state.steps_done | {i}
        changes["approved_gates"] = state.approved_gates - {i}

    elif event.kind is E.GATE_REQUESTED:
        i = _require_step(state, payload)
        if not state.step_gated[i]:
            raise IllegalTransition(f"step {i} is not gated")
        if i in state.pending_gates:
            raise IllegalTransition(f"gate for step {i} already pending")
        if i in state.approved_gates:
            raise IllegalTransition(f"gate for step {i} already approved")
        if i in state.steps_done:
            raise IllegalTransition(f"step {i} already completed")
        changes["pending_gates"] = state.pending_gates | {i}

    elif event.kind in (E.GATE_APPROVED, E.GATE_EDITED):
        i = _require_step(state, payload)
        if i not in state.pending_gates:
            raise IllegalTransition(f"no pending gate for step {i}")
        changes["pending_gates"] = state.pending_gates - {i}
        changes["approved_gates"] = state.approved_gates | {i}

    elif event.kind is E.GATE_REJECTED:
        i = _require_step(state, payload)
        if i not in state.pending_gates:
            raise IllegalTransition(f"no pending gate for step {i}")
        changes["pending_gates"] = state.pending_gates - {i}
        changes["approved_gates"] = state.approved_gates - {i}
        changes["steps_done"] = state.steps_done - {i}

    elif event.kind is E.ESCALATION_RAISED:
        if payload.get("reason") not in ESCALATION_KINDS:
            raise IllegalTransition("escalation_raised payload needs a known reason kind")

    elif event.kind is E.ONLINE_QA_FAILED:
        i = _payload_step(payload)
        if i is not None:
            if not (0 <= i < state.n_steps()):
                raise IllegalTransition(f"step_index {i} out of range")
            changes["steps_done"] = state.steps_done - {i}
            changes["approved_gates"] = state.approved_gates - {i}

    elif event.kind is E.QA_ESCALATED_TO_HUMAN:
        if state.qa_escalated:
            raise IllegalTransition("offline QA already escalated to a human")
        changes["qa_escalated"] = True

    elif event.kind in (E.QA_PASSED, E.QA_FAILED_REWORK):
        changes["qa_escalated"] = False
        if event.kind is E.QA_FAILED_REWORK:
            steps = payload.get("rework_steps", [])
            if not isinstance(steps, (list, tuple)) or not all(
                isinstance(i, int) and not isinstance(i, bool) and 0 <= i < state.n_steps() for i in steps
            ):
                raise IllegalTransition("rework_steps must list valid step indices")
            changes["steps_done"] = state.steps_done - set(steps)
            changes["approved_gates"] = state.approved_gates - set(steps)

    return replace(state, **changes)


def legal_events(state: TaskState, config: MachineConfig = DEFAULT_CONFIG) -> frozenset[EventKind]:
    """Event kinds for which some legal payload exists in this state.

    Kept in lockstep with ``apply_event``: a kind is in the set exactly when
    apply_event would accept it for at least one well-formed payload.
    """
    if state.terminal:
        return frozenset()

    kinds: set[EventKind] = set()
    n = state.n_steps()
    all_steps = set(range(n))
    for (phase, kind), _target in TRANSITIONS.items():
        if phase is not state.phase:
            continue
        if kind is E.TASK_SUBMITTED and state.version != 0:
            continue
        if kind is E.CLARIFICATION_ROUND_COMPLETED and state.clarify_rounds >= config.max_clarify_rounds:
            continue
        if kind is E.STEP_STARTED and n == 0:
            continue
        if kind is E.STEP_COMPLETED:
            completable = {
                i for i in all_steps - state.steps_done if not state.step_gated[i] or i in state.approved_gates
            }
            if not completable:
                continue
        if kind is E.GATE_REQUESTED:
            requestable = {
                i
                for i in all_steps
                if state.step_gated[i]
                and i not in state.pending_gates
                and i not in state.approved_gates
                and i not in state.steps_done
            }
            if not requestable:
                continue
        if kind in (E.GATE_APPROVED, E.GATE_REJECTED, E.GATE_EDITED) and not state.pending_gates:
            continue
        if kind is E.QA_ESCALATED_TO_HUMAN and state.qa_escalated:
            continue
        kinds.add(kind)
    return frozenset(kinds)
