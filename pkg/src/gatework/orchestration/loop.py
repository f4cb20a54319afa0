"""The plan-act-observe-verify decision loop.

``next_action`` is the pure decision function: given the task state, the
plan, and the active check reports it returns exactly one action. The
driver executes actions and feeds consequences back as events and reports.

Decision order (fixed, so replays are stable):

1. terminal -> error; pre-execution phases -> error (the driver runs
   clarify/plan/route itself, the loop owns execution onwards)
2. escalation predicates over the active reports, in priority order:
   conflicting sources, the same check failed twice for one step, latest
   self-consistency score below threshold
3. offline phase: all four verification reports passed -> Finalize, else
   the offline pass is (still) due -> StartOfflineQA
4. a completed step without online-QA coverage -> RunOnlineQA
5. everything done and covered -> StartOfflineQA
6. next pending step: unapproved gate -> RequestGate; high risk without a
   human expert attached -> Escalate(high_risk_step); else ExecuteStep
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence, Union

from gatework.core.machine import apply_event
from gatework.core.types import Actor, AuditEvent, EventKind, Phase, TaskState
from gatework.errors import NoPendingGate, NotExecutable, TerminalTask
from gatework.orchestration.plan import (
    EscalationKind,
    EscalationReason,
    GateChoice,
    GateDecision,
    Plan,
    RoutingRequest,
    StepStatus,
)
from gatework.orchestration.routing import Match, match_worker
from gatework.qa.report import CheckKind, CheckReport, CheckStatus
from gatework.workers.profiles import WorkerKind, WorkerProfile

PRE_EXECUTION_PHASES = frozenset({Phase.SUBMITTED, Phase.CLARIFYING, Phase.PLANNING, Phase.ROUTING})
OFFLINE_REPORT_COUNT = 4


@dataclass(frozen=True)
class ExecuteStep:
    step_index: int


@dataclass(frozen=True)
class RequestGate:
    step_index: int


@dataclass(frozen=True)
class RunOnlineQA:
    step_index: int


@dataclass(frozen=True)
class Escalate:
    reason: EscalationReason


@dataclass(frozen=True)
class StartOfflineQA:
    pass


@dataclass(frozen=True)
class Finalize:
    pass


Action = Union[ExecuteStep, RequestGate, RunOnlineQA, Escalate, StartOfflineQA, Finalize]


@dataclass(frozen=True)
class LoopConfig:
    max_rework: int = 2
    consistency_threshold: Fraction = Fraction(7, 10)


DEFAULT_LOOP_CONFIG = LoopConfig()


def _escalation_trigger(reports: Sequence[CheckReport], config: LoopConfig) -> EscalationReason | None:
    for report in reports:
        if any(f.code == "citation.conflicting_sources" for f in report.findings):
            return EscalationReason(EscalationKind.CONFLICTING_SOURCES, "sources disagree on a cited claim")

    fail_counts = Counter(
        (r.step_index, r.check_kind) for r in reports if r.status is CheckStatus.FAIL
    )
    repeated = [key for key, n in fail_counts.items() if n >= 2]
    if repeated:
        step, kind = min(repeated)
        return EscalationReason(EscalationKind.FAILED_CHECKS, f"{kind.value} failed twice for step {step}")

    latest_consistency = None
    for report in reports:
        if report.check_kind is CheckKind.SELF_CONSISTENCY:
            latest_consistency = report
    if latest_consistency is not None and latest_consistency.score is not None:
        if latest_consistency.score < config.consistency_threshold:
            return EscalationReason(
                EscalationKind.LOW_SELF_CONSISTENCY,
                f"self-consistency {latest_consistency.score} below {config.consistency_threshold}",
            )
    return None


def next_action(
    task: TaskState,
    plan: Plan,
    reports: Sequence[CheckReport],
    config: LoopConfig = DEFAULT_LOOP_CONFIG,
) -> Action:
    """Decide the single next move for a task in the execution loop."""
    if task.terminal:
        raise TerminalTask(f"task already {task.phase.value}")
    if task.phase in PRE_EXECUTION_PHASES:
        raise NotExecutable(f"task still in {task.phase.value}; the loop starts at execution")

    trigger = _escalation_trigger(reports, config)
    if trigger is not None:
        return Escalate(trigger)

    if task.phase is Phase.OFFLINE_QA:
        tail = reports[-OFFLINE_REPORT_COUNT:]
        if len(tail) == OFFLINE_REPORT_COUNT and all(r.status is CheckStatus.PASS for r in tail):
            return Finalize()
        return StartOfflineQA()

    # a step counts as QA-covered only by a non-failing report: failing rounds
    # reopen the step, so its redo needs a fresh online pass
    covered = {r.step_index for r in reports if r.status is not CheckStatus.FAIL}
    uncovered_done = sorted(i for i in task.steps_done if i not in covered)
    if uncovered_done:
        return RunOnlineQA(uncovered_done[0])

    pending = [i for i in range(task.n_steps()) if i not in task.steps_done]
    if not pending:
        return StartOfflineQA()

    i = pending[0]
    step = plan.step(i)
    if step.gated and i not in task.approved_gates:
        return RequestGate(i)
    if step.risk.value == "high" and task.worker_for("expert") is None:
        return Escalate(
            EscalationReason(EscalationKind.HIGH_RISK_STEP, f"step {i} is high risk and only an AI worker is attached")
        )
    return ExecuteStep(i)


# --- gate handling ----------------------------------------------------------


@dataclass(frozen=True)
class GateOutcome:
    state: TaskState
    plan: Plan
    event: AuditEvent


_GATE_EVENT = {
    GateChoice.APPROVE: EventKind.GATE_APPROVED,
    GateChoice.REJECT_WITH_NOTES: EventKind.GATE_REJECTED,
    GateChoice.EDIT_AND_APPROVE: EventKind.GATE_EDITED,
}


def handle_gate_decision(task: TaskState, plan: Plan, decision: GateDecision) -> GateOutcome:
    """Apply one human gate decision; emits the corresponding audit event.

    approve: the step may proceed. reject_with_notes: step marked reworked,
    plan revision bumped. edit_and_approve: description replaced, then
    proceeds (also a plan revision).
    """
    i = decision.step_index
    if not (0 <= i < task.n_steps()) or not task.step_gated[i]:
        raise NoPendingGate(f"step {i} is not a gated step")
    if i not in task.pending_gates:
        raise NoPendingGate(f"no gate awaiting a decision for step {i}")

    payload: dict = {
        "step_index": i,
        "notes": decision.notes,
        "decided_by": decision.decided_by,
        "decision": decision.decision.value,
    }
    if decision.decision is GateChoice.EDIT_AND_APPROVE:
        payload["new_description"] = decision.edited_description

    event = AuditEvent(
        seq=task.version,
        wall_time=decision.decided_at,
        actor=Actor.EXPERT,
        kind=_GATE_EVENT[decision.decision],
        payload=payload,
    )
    state = apply_event(task, event)

    if decision.decision is GateChoice.REJECT_WITH_NOTES:
        plan = replace(plan.with_step(i, status=StepStatus.REWORKED), revision=plan.revision + 1)
    elif decision.decision is GateChoice.EDIT_AND_APPROVE:
        plan = replace(plan.with_step(i, description=decision.edited_description), revision=plan.revision + 1)
    return GateOutcome(state=state, plan=plan, event=event)


# --- escalation routing -------------------------------------------------------


HUMAN_KINDS = frozenset({WorkerKind.EXPERT, WorkerKind.QA_EXPERT})


@dataclass(frozen=True)
class Assignment:
    worker_id: str
    role: str
    time_estimate_h: float
    reason: EscalationReason


def escalate(
    task: TaskState,
    reason: EscalationReason,
    pool: Sequence[WorkerProfile],
    required_skills: frozenset[str],
    base_hours: float = 1.0,
) -> Assignment:
    """Route an uncertain or failed step to a human expert (never an AI)."""
    if task.phase not in (Phase.EXECUTING, Phase.ONLINE_QA, Phase.OFFLINE_QA):
        raise NotExecutable(f"cannot escalate from phase {task.phase.value}")
    match: Match = match_worker(
        RoutingRequest(required_skills=required_skills),
        pool,
        base_hours=base_hours,
        kinds=HUMAN_KINDS,
    )
    return Assignment(worker_id=match.worker_id, role="expert", time_estimate_h=match.time_estimate_h, reason=reason)
