"""Resumable task driver: runs one task's lifecycle end to end.

The driver owns the audit log and derives everything else from it: it
applies every event through the state machine (so an illegal sequence can
never be persisted), executes ``next_action`` decisions against worker
handles, runs online/offline QA, and blocks when a human decision is
required (step gates, escalated offline QA). ``resume_with_gate`` /
``resume_with_qa`` continue a blocked task; the service calls those from
its endpoints, tests and demos pass decider callbacks instead.

Progress guarantees: each step has an attempt budget of 1 + max_rework
executions. The second failure of the same check escalates the step to a
human expert; the expert's attempt is final for online purposes (its
residual findings are downgraded to uncertain and settled by offline QA,
whose own rework cycles are capped before escalating to a human QA
decision). Under workers that eventually return outputs and gate decisions
that eventually arrive, a task therefore terminates within
steps x (1 + max_rework) executions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Mapping, Sequence

from gatework.clock import Clock, VirtualClock
from gatework.content import ContentStore
from gatework.core.log import AuditLog, append, replay
from gatework.core.machine import DEFAULT_CONFIG as DEFAULT_MACHINE_CONFIG
from gatework.core.machine import MachineConfig, apply_event
from gatework.core.types import Actor, AuditEvent, EventKind, MediaKind, Phase, TaskBrief, TaskState
from gatework.errors import NoMatch, WorkerUnavailable
from gatework.orchestration.loop import (
    Action,
    DEFAULT_LOOP_CONFIG,
    Escalate,
    ExecuteStep,
    Finalize,
    LoopConfig,
    RequestGate,
    RunOnlineQA,
    StartOfflineQA,
    next_action,
)
from gatework.orchestration.plan import (
    EscalationKind,
    EscalationReason,
    GateDecision,
    Plan,
    RoutingRequest,
    StepStatus,
    TemplateLibrary,
    decompose,
)
from gatework.orchestration.loop import handle_gate_decision
from gatework.orchestration.routing import match_worker
from gatework.qa.checks import (
    SourceDoc,
    check_spec_conformance,
    match_citations,
    reconcile_totals,
    self_consistency,
)
from gatework.qa.offline import QAConfig, DEFAULT_QA_CONFIG, offline_verify
from gatework.qa.report import CheckKind, CheckReport, CheckStatus, Severity
from gatework.qa.tabular import TabularData
from gatework.core.types import Citation, Deliverable
from gatework.errors import MalformedTable
from gatework.qa.report import Finding
from gatework.workers.handles import ExecutionContext, StepOutput, WorkerHandle, perform_step
from gatework.workers.profiles import WorkerKind, WorkerProfile

E = EventKind


class DriverStatus(str, Enum):
    RUNNING = "running"
    WAITING_GATE = "waiting_gate"
    WAITING_QA_DECISION = "waiting_qa_decision"
    FINALIZED = "finalized"
    DECLINED = "declined"


GateDecider = Callable[[int, Plan], GateDecision]
QADecider = Callable[["TaskDriver"], tuple[bool, str]]  # (approve, notes)


@dataclass
class DriverConfig:
    loop: LoopConfig = DEFAULT_LOOP_CONFIG
    machine: MachineConfig = DEFAULT_MACHINE_CONFIG
    qa: QAConfig = DEFAULT_QA_CONFIG
    consistency_k: int = 3
    clarify_rounds: int = 1
    max_offline_reworks: int = 1
    max_loop_iterations: int = 500  # hard stop against driver bugs


class TaskDriver:
    def __init__(
        self,
        brief: TaskBrief,
        templates: TemplateLibrary,
        pool: Sequence[WorkerProfile],
        handles: Mapping[str, WorkerHandle],
        clock: Clock | None = None,
        store: ContentStore | None = None,
        config: DriverConfig | None = None,
        gate_decider: GateDecider | None = None,
        qa_decider: QADecider | None = None,
        event_sink: Callable[[AuditEvent], None] | None = None,
    ):
        self.brief = brief
        self.templates = templates
        self.pool = list(pool)
        self.handles = dict(handles)
        self.clock = clock or VirtualClock()
        self.store = store or ContentStore()
        self.config = config or DriverConfig()
        self.gate_decider = gate_decider
        self.qa_decider = qa_decider
        self.event_sink = event_sink

        self.log = AuditLog()
        self.state = replay(self.log, self.config.machine)
        self.plan: Plan | None = None
        self.reports: list[CheckReport] = []
        self.attempts: dict[int, int] = {}
        self.expert_steps: set[int] = set()
        self.gate_rounds: dict[int, int] = {}
        self.offline_reworks = 0
        self.execute_count = 0
        self.n_escalations = 0
        self.n_reworks = 0

        # deliverable contributions per step; a redo replaces the step's
        # entry wholesale so discarded attempts cannot leak files/citations
        self._contrib: dict[int, dict] = {}
        self._external: dict = {"files": {}, "citations": [], "sources": [], "summaries": []}
        self._samples: dict[int, list[str]] = {}
        self.exec_hours = 0.0  # time/money spent stays cumulative across redos
        self.cost_usd = 0.0

    # --- event plumbing ---------------------------------------------------

    def _emit(self, kind: EventKind, actor: Actor, payload: dict | None = None) -> None:
        event = AuditEvent(
            seq=len(self.log),
            wall_time=self.clock.now_ms(),
            actor=actor,
            kind=kind,
            payload=payload or {},
        )
        self.state = apply_event(self.state, event, self.config.machine)
        self.log = append(self.log, event)
        if self.event_sink is not None:
            self.event_sink(event)

    def _apply_external(self, event: AuditEvent, state: TaskState) -> None:
        # keep log wall times monotone even if the decision carries an older stamp
        last = self.log.last()
        if last is not None and event.wall_time < last.wall_time:
            event = replace(event, wall_time=last.wall_time)
        self.state = state
        self.log = append(self.log, event)
        if self.event_sink is not None:
            self.event_sink(event)

    # --- intake: clarify, plan, route --------------------------------------

    def start(self) -> DriverStatus:
        self._emit(E.TASK_SUBMITTED, Actor.CLIENT, {"schema": 1, "brief_digest": self.brief.digest()})
        self._emit(E.CLARIFICATION_STARTED, Actor.AI_WORKER, {"questions": self._clarifying_questions()})
        for round_no in range(min(self.config.clarify_rounds, self.config.machine.max_clarify_rounds)):
            self._emit(E.CLARIFICATION_ROUND_COMPLETED, Actor.CLIENT, {"round": round_no})
        self._emit(E.PLANNING_STARTED, Actor.AI_WORKER, {})
        self.plan = decompose(self.brief, self.templates)
        self._emit(E.PLAN_COMMITTED, Actor.AI_WORKER, self.plan.to_dict())

        try:
            request = RoutingRequest(required_skills=self.plan.skills_union())
            match = match_worker(request, self.pool, kinds=frozenset({WorkerKind.AI}))
            role = Actor.AI_WORKER.value
        except NoMatch:
            try:
                match = match_worker(
                    RoutingRequest(required_skills=self.plan.skills_union()),
                    self.pool,
                    kinds=frozenset({WorkerKind.EXPERT}),
                )
                role = Actor.EXPERT.value
            except NoMatch:
                self._emit(E.TASK_DECLINED, Actor.SYSTEM, {"note": "no worker covers the required skills"})
                return DriverStatus.DECLINED
        self._emit(
            E.WORKER_ASSIGNED,
            Actor.SYSTEM,
            {"role": role, "worker_id": match.worker_id, "time_estimate_h": match.time_estimate_h},
        )
        return self.advance()

    def _clarifying_questions(self) -> list[str]:
        questions = ["Which output format do you prefer?"]
        if not self.brief.acceptance_criteria:
            questions.append("What would make this result acceptable?")
        return questions

    # --- main loop -----------------------------------------------------------

    def advance(self) -> DriverStatus:
        assert self.plan is not None, "advance() before start()"
        for _ in range(self.config.max_loop_iterations):
            if self.state.phase is Phase.FINALIZED:
                return DriverStatus.FINALIZED
            if self.state.phase is Phase.DECLINED:
                return DriverStatus.DECLINED
            if self.state.phase is Phase.REWORK:
                self._emit(E.REWORK_STARTED, Actor.SYSTEM, {})
                continue
            if self.state.qa_escalated:
                status = self._settle_qa_escalation()
                if status is not None:
                    return status
                continue

            action = next_action(self.state, self.plan, self.reports, self.config.loop)
            status = self._dispatch(action)
            if status is not None:
                return status
        raise RuntimeError(f"driver exceeded {self.config.max_loop_iterations} iterations")

    def _dispatch(self, action: Action) -> DriverStatus | None:
        if isinstance(action, RequestGate):
            return self._do_request_gate(action.step_index)
        if isinstance(action, ExecuteStep):
            self._do_execute(action.step_index)
            return None
        if isinstance(action, RunOnlineQA):
            self._do_online_qa(action.step_index)
            return None
        if isinstance(action, Escalate):
            self._do_escalate(action.reason)
            return None
        if isinstance(action, StartOfflineQA):
            self._do_offline()
            return None
        if isinstance(action, Finalize):
            self._emit(E.QA_PASSED, Actor.SYSTEM, {"note": "offline verification passed"})
            return DriverStatus.FINALIZED
        raise AssertionError(f"unknown action {action!r}")

    # --- gates -----------------------------------------------------------------

    def _do_request_gate(self, i: int) -> DriverStatus | None:
        if i not in self.state.pending_gates:
            step = self.plan.step(i)
            self._emit(
                E.GATE_REQUESTED,
                Actor.SYSTEM,
                {"step_index": i, "description": step.description, "risk": step.risk.value},
            )
        if self.gate_decider is None:
            return DriverStatus.WAITING_GATE
        decision = self.gate_decider(i, self.plan)
        self.apply_gate_decision(decision)
        return None

    def apply_gate_decision(self, decision: GateDecision) -> None:
        """Apply a gate decision to state, plan, and log (no advancing)."""
        outcome = handle_gate_decision(self.state, self.plan, decision)
        self.plan = outcome.plan
        self._apply_external(outcome.event, outcome.state)
        if outcome.event.kind is E.GATE_REJECTED:
            self.gate_rounds[decision.step_index] = self.gate_rounds.get(decision.step_index, 0) + 1
            self.n_reworks += 1

    def resume_with_gate(self, decision: GateDecision) -> DriverStatus:
        self.apply_gate_decision(decision)
        return self.advance()

    # --- execution ----------------------------------------------------------------

    def _acting_worker(self, i: int) -> tuple[str, Actor]:
        step = self.plan.step(i)
        expert_id = self.state.worker_for("expert")
        if expert_id is not None and (i in self.expert_steps or step.risk.value == "high"):
            return expert_id, Actor.EXPERT
        ai_id = self.state.worker_for("ai_worker")
        if ai_id is not None:
            return ai_id, Actor.AI_WORKER
        if expert_id is not None:
            return expert_id, Actor.EXPERT
        raise NoMatch("no worker assigned to the task")

    def _do_execute(self, i: int) -> None:
        worker_id, actor = self._acting_worker(i)
        handle = self.handles[worker_id]
        step = self.plan.step(i)
        attempt = self.attempts.get(i, 0)
        self.attempts[i] = attempt + 1
        self.execute_count += 1

        self._emit(E.STEP_STARTED, actor, {"step_index": i, "worker_id": worker_id, "attempt": attempt})
        self.plan = self.plan.with_step(i, status=StepStatus.IN_PROGRESS)

        context = ExecutionContext(task_id=self.brief.task_id, attempt=attempt, brief_text=self.brief.brief_text)
        runs = self.config.consistency_k if (actor is Actor.AI_WORKER and self.config.consistency_k >= 2) else 1
        self._samples.pop(i, None)  # samples of a discarded attempt must not outlive it
        outputs: list[StepOutput] = []
        for _ in range(runs):
            try:
                outputs.append(perform_step(handle, step, context))
            except WorkerUnavailable:
                if outputs:
                    break
                raise
        primary = outputs[0]
        self._absorb_output(i, primary)
        samples = [o.answer for o in outputs]
        if len(samples) >= 2:
            self._samples[i] = samples

        payload = {
            "step_index": i,
            "worker_id": worker_id,
            "answer": primary.answer,
            "elapsed_h": primary.elapsed_h,
            "cost_usd": primary.cost_usd,
        }
        # deliverable deltas ride in the event so a driver can be rebuilt from the log
        if primary.files:
            payload["files"] = [dict(f) for f in primary.files]
        if primary.citations:
            payload["citations"] = [c.to_dict() for c in primary.citations]
        if primary.recorded_sources:
            payload["recorded_sources"] = [list(s) for s in primary.recorded_sources]
        if primary.summary:
            payload["summary"] = primary.summary
        if len(samples) >= 2:
            payload["consistency_samples"] = samples
        self._emit(E.STEP_COMPLETED, actor, payload)
        self.plan = self.plan.with_step(i, status=StepStatus.DONE)
        if hasattr(self.clock, "advance_hours"):
            self.clock.advance_hours(primary.elapsed_h)

    def _absorb_output(self, i: int, output: StepOutput) -> None:
        sources = []
        for name, text in output.recorded_sources:
            ref = self.store.put_text(name, MediaKind.LINK, text)
            sources.append(SourceDoc(ref=ref, text=text))
        self._contrib[i] = {
            "files": {
                f["name"]: {"media_kind": f.get("media_kind", "other"), "content": f.get("content", "")}
                for f in output.files
            },
            "citations": list(output.citations),
            "sources": sources,
            "summary": output.summary,
        }
        self.exec_hours += output.elapsed_h
        self.cost_usd += output.cost_usd

    def _absorb_external(self, output: StepOutput) -> None:
        for f in output.files:
            self._external["files"][f["name"]] = {
                "media_kind": f.get("media_kind", "other"),
                "content": f.get("content", ""),
            }
        self._external["citations"].extend(output.citations)
        for name, text in output.recorded_sources:
            ref = self.store.put_text(name, MediaKind.LINK, text)
            self._external["sources"].append(SourceDoc(ref=ref, text=text))
        if output.summary:
            self._external["summaries"].append(output.summary)

    @property
    def files(self) -> dict[str, dict[str, str]]:
        """Current deliverable files: step contributions in order, uploads last."""
        merged: dict[str, dict[str, str]] = {}
        for i in sorted(self._contrib):
            merged.update(self._contrib[i]["files"])
        merged.update(self._external["files"])
        return merged

    def _all_citations(self) -> list[Citation]:
        out: list[Citation] = []
        for i in sorted(self._contrib):
            out.extend(self._contrib[i]["citations"])
        out.extend(self._external["citations"])
        return out

    def _all_sources(self) -> list[SourceDoc]:
        out: list[SourceDoc] = []
        for i in sorted(self._contrib):
            out.extend(self._contrib[i]["sources"])
        out.extend(self._external["sources"])
        return out

    def _assemble_deliverable(self) -> Deliverable:
        refs = tuple(
            self.store.put_text(name, MediaKind(body["media_kind"]), body["content"])
            for name, body in sorted(self.files.items())
        )
        summaries = [self._contrib[i]["summary"] for i in sorted(self._contrib) if self._contrib[i]["summary"]]
        summaries.extend(self._external["summaries"])
        last_step = self.plan.steps[-1].index if self.plan else 0
        return Deliverable(
            files=refs,
            summary=" ".join(summaries[-3:]),
            citations=tuple(self._all_citations()),
            produced_by=Actor.AI_WORKER,
            step_index=last_step,
        )

    # --- online QA -------------------------------------------------------------------

    def _step_tables(self) -> list[TabularData]:
        tables = []
        for name, body in sorted(self.files.items()):
            if body["media_kind"] == "spreadsheet" or name.casefold().endswith(".csv"):
                try:
                    tables.append(TabularData.from_csv(body["content"], name=name))
                except MalformedTable:
                    tables.append(None)  # type: ignore[arg-type]
        return tables

    def _do_online_qa(self, i: int) -> None:
        self._emit(E.ONLINE_QA_STARTED, Actor.SYSTEM, {"step_index": i})

        new_reports: list[CheckReport] = []
        recon_findings: list[Finding] = []
        tables = []
        for table in self._step_tables():
            if table is None:
                recon_findings.append(Finding("table.malformed", "unparseable tabular output", Severity.MATERIAL))
            else:
                tables.append(table)
                recon_findings.extend(reconcile_totals(table, step_index=i).material_findings)
        new_reports.append(
            CheckReport(
                check_kind=CheckKind.UNIT_TOTAL_RECONCILIATION,
                step_index=i,
                status=CheckStatus.FAIL if recon_findings else CheckStatus.PASS,
                findings=tuple(recon_findings),
            )
        )
        deliverable = self._assemble_deliverable()
        citation_report = match_citations(
            replace(deliverable, step_index=i), self._all_sources() + self._brief_sources()
        )
        new_reports.append(citation_report)
        if len(self._samples.get(i, [])) >= 2:
            new_reports.append(self_consistency(self._samples[i], key=self.config.qa.consistency_key, step_index=i))
        if self.plan is not None and i == self.plan.steps[-1].index:
            # deliverable is fully assembled here: acceptance criteria run as
            # online tests so drift is caught before the offline pass
            conformance = check_spec_conformance(
                replace(deliverable, step_index=i), self.brief.acceptance_criteria, tables=tables
            )
            if conformance.status is not CheckStatus.UNCERTAIN:
                new_reports.append(conformance)  # free-text-only uncertainty is offline's call

        failed = any(r.status is CheckStatus.FAIL for r in new_reports)
        budget = 1 + self.config.loop.max_rework
        if not failed:
            self.reports.extend(new_reports)
            self._emit(E.ONLINE_QA_PASSED, Actor.SYSTEM, {"step_index": i})
            return

        reopen = self.attempts.get(i, 0) < budget and i not in self.expert_steps
        if reopen:
            # keep only the step's failures: they feed the failed-twice
            # escalation predicate, while passing reports of a discarded
            # attempt must not count as coverage for the redo
            self.reports = [r for r in self.reports if r.step_index != i or r.status is CheckStatus.FAIL]
            self.reports.extend(r for r in new_reports if r.status is CheckStatus.FAIL)
            self._emit(E.ONLINE_QA_FAILED, Actor.SYSTEM, {"step_index": i, "note": "step reopened for rework"})
            self.plan = self.plan.with_step(i, status=StepStatus.REWORKED)
            self.n_reworks += 1
        else:
            # final attempt: record residual findings as uncertainty for offline QA
            softened = [
                replace(r, status=CheckStatus.UNCERTAIN) if r.status is CheckStatus.FAIL else r
                for r in new_reports
            ]
            self.reports.extend(softened)
            self._emit(E.ONLINE_QA_FAILED, Actor.SYSTEM, {"note": f"residual findings on step {i} deferred to offline QA"})

    def _brief_sources(self) -> list[SourceDoc]:
        sources = []
        for ref in self.brief.attachments:
            text = self.store.get_text(ref)
            if text is not None:
                sources.append(SourceDoc(ref=ref, text=text))
        return sources

    # --- escalation ---------------------------------------------------------------------

    def _focus_step(self, reason: EscalationReason) -> int:
        if reason.kind is EscalationKind.HIGH_RISK_STEP:
            for i in range(self.state.n_steps()):
                if i not in self.state.steps_done and self.plan.step(i).risk.value == "high":
                    return i
        for report in reversed(self.reports):
            if report.status is CheckStatus.FAIL and report.step_index >= 0:
                return report.step_index
        for i in range(self.state.n_steps()):
            if i not in self.state.steps_done:
                return i
        return self.state.n_steps() - 1

    def _do_escalate(self, reason: EscalationReason) -> None:
        from gatework.orchestration.loop import escalate as route_escalation

        i = self._focus_step(reason)
        self._emit(
            E.ESCALATION_RAISED,
            Actor.SYSTEM,
            {"reason": reason.kind.value, "detail": reason.detail, "step_index": i},
        )
        self.n_escalations += 1
        assignment = route_escalation(
            self.state, reason, self.pool, self.plan.step(i).required_skills, self.plan.step(i).base_hours
        )
        if self.state.worker_for("expert") != assignment.worker_id:
            self._emit(
                E.WORKER_ASSIGNED,
                Actor.SYSTEM,
                {"role": "expert", "worker_id": assignment.worker_id, "time_estimate_h": assignment.time_estimate_h},
            )
        self.expert_steps.add(i)
        self.reports = [r for r in self.reports if r.step_index != i]
        if i in self.state.steps_done:
            # expert redoes the step: reopen it through the machine
            self._emit(E.ONLINE_QA_STARTED, Actor.SYSTEM, {"step_index": i, "note": "escalation review"})
            self._emit(E.ONLINE_QA_FAILED, Actor.SYSTEM, {"step_index": i, "note": "reopened for expert redo"})
            self.plan = self.plan.with_step(i, status=StepStatus.REWORKED)

    # --- offline QA -----------------------------------------------------------------------

    def _do_offline(self) -> None:
        if self.state.phase is not Phase.OFFLINE_QA:
            deliverable = self._assemble_deliverable()
            self._emit(
                E.DELIVERABLE_RECORDED,
                Actor.AI_WORKER,
                {"deliverable": deliverable.to_dict()},
            )
            self._emit(E.OFFLINE_QA_STARTED, Actor.SYSTEM, {})

        deliverable = self._assemble_deliverable()
        last_step = deliverable.step_index
        verdict = offline_verify(
            self.brief,
            deliverable,
            self.log,
            store=self.store,
            extra_sources=self._all_sources(),
            consistency_samples=self._samples.get(last_step),
            config=self.config.qa,
        )
        self.reports.extend(verdict.reports)

        if verdict.outcome.value == "pass":
            return  # next_action turns the clean pass into Finalize
        if verdict.outcome.value == "rework":
            if self.offline_reworks < self.config.max_offline_reworks and self.attempts.get(last_step, 0) < (
                1 + self.config.loop.max_rework
            ):
                self.offline_reworks += 1
                self.n_reworks += 1
                self._drop_offline_reports()
                self.reports = [r for r in self.reports if r.step_index != last_step]
                self._emit(
                    E.QA_FAILED_REWORK,
                    Actor.SYSTEM,
                    {"rework_steps": [last_step], "material_findings": self._verdict_finding_codes(verdict)},
                )
                return
        # uncertain, or rework budget exhausted: hand to a human QA expert
        self._emit(E.QA_ESCALATED_TO_HUMAN, Actor.SYSTEM, {"confidence": verdict.confidence})

    @staticmethod
    def _verdict_finding_codes(verdict) -> list[str]:
        return sorted({f.code for r in verdict.reports for f in r.material_findings})

    def _drop_offline_reports(self) -> None:
        self.reports = self.reports[:-4] if len(self.reports) >= 4 else []

    def _settle_qa_escalation(self) -> DriverStatus | None:
        if self.qa_decider is None:
            return DriverStatus.WAITING_QA_DECISION
        approve, notes = self.qa_decider(self)
        self.apply_qa_decision(approve, notes)
        return None

    def apply_qa_decision(self, approve: bool, notes: str = "") -> None:
        """Resolve an escalated offline-QA pass with a human QA decision."""
        if approve:
            self._emit(E.QA_PASSED, Actor.QA_EXPERT, {"notes": notes})
        else:
            last_step = self.plan.steps[-1].index
            self._drop_offline_reports()
            self.reports = [r for r in self.reports if r.step_index != last_step]
            self.n_reworks += 1
            self._emit(E.QA_FAILED_REWORK, Actor.QA_EXPERT, {"rework_steps": [last_step], "notes": notes})

    def resume_with_qa(self, approve: bool, notes: str = "") -> DriverStatus:
        self.apply_qa_decision(approve, notes)
        return self.advance()

    # --- external deliverable uploads --------------------------------------------------

    def record_external_deliverable(self, output: StepOutput, actor: Actor = Actor.EXPERT) -> None:
        """Absorb an uploaded deliverable delta and log it (Executing/OnlineQA only).

        Uploads live outside the per-step contributions: a later rework of
        the active step must not discard what a human added by hand.
        """
        self._absorb_external(output)
        self._emit(
            E.DELIVERABLE_RECORDED,
            actor,
            {
                "files": [dict(f) for f in output.files],
                "citations": [c.to_dict() for c in output.citations],
                "summary": output.summary,
            },
        )

    # --- crash recovery -----------------------------------------------------------------

    @classmethod
    def rebuild(
        cls,
        brief: TaskBrief,
        templates: TemplateLibrary,
        pool: Sequence[WorkerProfile],
        handles: Mapping[str, WorkerHandle],
        log: AuditLog,
        **kwargs,
    ) -> "TaskDriver":
        """Reconstruct a driver from a persisted log.

        Task state, plan, attempts, deliverable parts, and counters all fold
        out of the events. Online-QA reports are not persisted; steps whose
        reports are lost are simply re-checked on the next advance (the
        checks are deterministic, so this only re-derives what the crash
        dropped).
        """
        from gatework.orchestration.plan import plan_from_log

        driver = cls(brief, templates, pool, handles, **kwargs)
        sink, driver.event_sink = driver.event_sink, None
        for event in log:
            driver.state = apply_event(driver.state, event, driver.config.machine)
            driver.log = append(driver.log, event)
            payload = event.payload
            if event.kind is E.STEP_STARTED:
                i = payload["step_index"]
                driver.attempts[i] = driver.attempts.get(i, 0) + 1
                driver.execute_count += 1
            elif event.kind is E.STEP_COMPLETED:
                i = payload["step_index"]
                output = StepOutput(
                    summary=payload.get("summary", ""),
                    answer=payload.get("answer", ""),
                    files=tuple(payload.get("files", [])),
                    citations=tuple(Citation.from_dict(c) for c in payload.get("citations", [])),
                    recorded_sources=tuple((s[0], s[1]) for s in payload.get("recorded_sources", [])),
                    elapsed_h=float(payload.get("elapsed_h", 0.0)),
                    cost_usd=float(payload.get("cost_usd", 0.0)),
                )
                driver._samples.pop(i, None)
                driver._absorb_output(i, output)
                if len(payload.get("consistency_samples", [])) >= 2:
                    driver._samples[i] = [str(s) for s in payload["consistency_samples"]]
            elif event.kind is E.DELIVERABLE_RECORDED and "files" in payload:
                driver._absorb_external(
                    StepOutput(
                        summary=payload.get("summary", ""),
                        files=tuple(payload.get("files", [])),
                        citations=tuple(Citation.from_dict(c) for c in payload.get("citations", [])),
                    )
                )
            elif event.kind is E.ESCALATION_RAISED:
                driver.n_escalations += 1
                if "step_index" in payload:
                    driver.expert_steps.add(payload["step_index"])
            elif event.kind is E.GATE_REJECTED:
                driver.n_reworks += 1
            elif event.kind is E.ONLINE_QA_FAILED and "step_index" in payload:
                driver.n_reworks += 1
            elif event.kind is E.QA_FAILED_REWORK:
                driver.offline_reworks += 1
                driver.n_reworks += 1
        driver.plan = plan_from_log(log)
        driver.event_sink = sink
        return driver

    # --- introspection ------------------------------------------------------------------

    @property
    def status(self) -> DriverStatus:
        if self.state.phase is Phase.FINALIZED:
            return DriverStatus.FINALIZED
        if self.state.phase is Phase.DECLINED:
            return DriverStatus.DECLINED
        if self.state.pending_gates:
            return DriverStatus.WAITING_GATE
        if self.state.qa_escalated:
            return DriverStatus.WAITING_QA_DECISION
        return DriverStatus.RUNNING
