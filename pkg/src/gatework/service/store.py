"""File-backed task store with write-ahead event persistence.

Layout under the store root:

    tasks/<id>.events          append-only audit log (NDJSON, fsynced)
    tasks/<id>/brief.json      submitted brief
    tasks/<id>/deliverables/   uploaded and produced files
    datasets/                  results files served to the stats endpoints
    runs/<run-id>/             simulation outputs and manifests

Every mutation appends its events (flushed and fsynced) before the call
returns, so a process kill after an acknowledged mutation loses nothing:
startup rebuilds every task by replaying its log. A torn trailing line
from a crash mid-write is dropped on recovery.

Concurrency: one lock per task serializes mutations (single writer);
reads take a snapshot under the same lock. Gate decisions are
first-writer-wins: the loser gets Conflict.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from pathlib import Path
from typing import Any, Callable

from gatework.clock import Clock, RealClock
from gatework.content import ContentStore
from gatework.core.log import AuditLog, from_events
from gatework.core.types import (
    Actor,
    Area,
    AuditEvent,
    Citation,
    EventKind,
    MediaKind,
    Phase,
    TaskBrief,
    TaskState,
    sha256_hex,
)
from gatework.data import TEMPLATES_FILE, data_path
from gatework.errors import Conflict, NoPendingGate, NotFound, ValidationFailed
from gatework.orchestration.driver import DriverConfig, TaskDriver
from gatework.orchestration.plan import GateChoice, GateDecision, Plan, TemplateLibrary
from gatework.service.stubs import default_pool
from gatework.workers.handles import ScriptedWorker, StepOutput, WorkerHandle
from gatework.workers.profiles import WorkerProfile

QA_GATE_SUFFIX = "qa"


def safe_file_name(name: str) -> str:
    """Reject names that could escape a task directory."""
    if (
        not name
        or name != Path(name).name
        or name in (".", "..")
        or name.startswith(".")
        or "\\" in name
        or "\x00" in name
    ):
        raise ValidationFailed(f"unsafe file name {name!r}")
    return name


class TaskRuntime:
    def __init__(self, task_id: str, brief: TaskBrief, driver: TaskDriver):
        self.task_id = task_id
        self.brief = brief
        self.driver = driver
        self.lock = threading.Lock()

    @property
    def state(self) -> TaskState:
        return self.driver.state

    @property
    def log(self) -> AuditLog:
        return self.driver.log

    @property
    def plan(self) -> Plan | None:
        return self.driver.plan


class TaskStore:
    def __init__(
        self,
        root: str | Path,
        templates: TemplateLibrary | None = None,
        pool: list[WorkerProfile] | None = None,
        handles: dict[str, WorkerHandle] | None = None,
        clock: Clock | None = None,
        driver_config: DriverConfig | None = None,
        fixtures_dir: str | Path | None = None,
    ):
        self.root = Path(root)
        (self.root / "tasks").mkdir(parents=True, exist_ok=True)
        (self.root / "datasets").mkdir(exist_ok=True)
        (self.root / "runs").mkdir(exist_ok=True)

        self.templates = templates or TemplateLibrary.from_file(data_path(TEMPLATES_FILE))
        if pool is None or handles is None:
            pool, handles = default_pool(self.templates)
        if fixtures_dir is not None:
            # fixture-backed AI worker replaces the stub agent
            ai = next(p for p in pool if p.worker_id == "agent-0")
            handles = dict(handles)
            handles["agent-0"] = ScriptedWorker.from_dir(ai, fixtures_dir)
        self.pool = pool
        self.handles = handles
        self.clock = clock or RealClock()
        self.driver_config = driver_config or DriverConfig()

        self._tasks: dict[str, TaskRuntime] = {}
        self._create_lock = threading.Lock()
        self._recover()

    # --- paths -----------------------------------------------------------

    def events_path(self, task_id: str) -> Path:
        return self.root / "tasks" / f"{task_id}.events"

    def task_dir(self, task_id: str) -> Path:
        return self.root / "tasks" / task_id

    # --- persistence -------------------------------------------------------

    def _sink_for(self, task_id: str) -> Callable[[AuditEvent], None]:
        path = self.events_path(task_id)

        def sink(event: AuditEvent) -> None:
            with path.open("a", encoding="utf-8", newline="\n") as f:
                f.write(event.to_json_line())
                f.write("\n")
                f.flush()
                os.fsync(f.fileno())

        return sink

    def _read_log_tolerant(self, path: Path) -> AuditLog:
        events = []
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                events.append(AuditEvent.from_json_line(line))
            except (json.JSONDecodeError, KeyError, ValueError):
                break  # torn trailing write from a crash; earlier lines are intact
        return from_events(events)

    def _recover(self) -> None:
        for events_file in sorted((self.root / "tasks").glob("*.events")):
            task_id = events_file.stem
            brief_file = self.task_dir(task_id) / "brief.json"
            if not brief_file.is_file():
                continue
            brief = TaskBrief.from_dict(json.loads(brief_file.read_text(encoding="utf-8")))
            content = ContentStore()
            attachments_dir = self.task_dir(task_id) / "attachments"
            if attachments_dir.is_dir():
                for ref in brief.attachments:
                    src = attachments_dir / ref.name
                    if src.is_file():
                        content.put_text(ref.name, ref.media_kind, src.read_text(encoding="utf-8"))
            log = self._read_log_tolerant(events_file)
            driver = TaskDriver.rebuild(
                brief,
                self.templates,
                self.pool,
                self.handles,
                log,
                clock=self.clock,
                store=content,
                config=self.driver_config,
                event_sink=self._sink_for(task_id),
            )
            self._tasks[task_id] = TaskRuntime(task_id, brief, driver)

    # --- operations -----------------------------------------------------------

    def submit_task(self, payload: dict[str, Any]) -> tuple[str, TaskState]:
        brief_text = (payload.get("brief_text") or "").strip()
        if not brief_text:
            raise ValidationFailed("brief_text must be non-empty")
        try:
            area = Area(payload.get("area", "Operations"))
        except ValueError as exc:
            raise ValidationFailed(f"unknown area: {payload.get('area')!r}") from exc

        with self._create_lock:
            task_id = f"t-{len(self._tasks):05d}-{uuid.uuid4().hex[:6]}"
            task_dir = self.task_dir(task_id)
            task_dir.mkdir(parents=True, exist_ok=True)
            (task_dir / "deliverables").mkdir(exist_ok=True)
            (task_dir / "attachments").mkdir(exist_ok=True)

            # inline brief attachments: persisted to disk and resolvable by QA
            content = ContentStore()
            refs = []
            for attachment in payload.get("attachments", []):
                try:
                    name = safe_file_name(attachment["name"])
                    kind = MediaKind(attachment.get("media_kind", "other"))
                    text = attachment.get("content", "")
                except (KeyError, TypeError, ValueError) as exc:
                    raise ValidationFailed(f"bad attachment entry: {exc}") from exc
                refs.append(content.put_text(name, kind, text))
                (task_dir / "attachments" / name).write_text(text, encoding="utf-8")

            brief = TaskBrief(
                task_id=task_id,
                area=area,
                category=payload.get("category", "generic"),
                brief_text=brief_text,
                attachments=tuple(refs),
                acceptance_criteria=tuple(payload.get("acceptance_criteria", [])),
            )
            (task_dir / "brief.json").write_text(json.dumps(brief.to_dict(), indent=2), encoding="utf-8")
            driver = TaskDriver(
                brief,
                self.templates,
                self.pool,
                self.handles,
                clock=self.clock,
                store=content,
                config=self.driver_config,
                event_sink=self._sink_for(task_id),
            )
            runtime = TaskRuntime(task_id, brief, driver)
            self._tasks[task_id] = runtime

        with runtime.lock:
            driver.start()
            self._persist_deliverables(runtime)
        return task_id, driver.state

    def _persist_deliverables(self, runtime: TaskRuntime) -> None:
        out = self.task_dir(runtime.task_id) / "deliverables"
        for name, body in runtime.driver.files.items():
            (out / safe_file_name(name)).write_text(body["content"], encoding="utf-8")

    def get(self, task_id: str) -> TaskRuntime:
        runtime = self._tasks.get(task_id)
        if runtime is None:
            raise NotFound(f"no task {task_id!r}")
        return runtime

    def task_ids(self) -> list[str]:
        return sorted(self._tasks)

    def get_task_view(self, task_id: str, recent: int = 10) -> dict[str, Any]:
        runtime = self.get(task_id)
        with runtime.lock:
            state = runtime.state
            plan = runtime.plan
            events = runtime.log.events[-recent:]
            return {
                "task_id": task_id,
                "brief": runtime.brief.to_dict(),
                "state": state.to_dict(),
                "status": runtime.driver.status.value,
                "plan": plan.to_dict() if plan else None,
                "recent_events": [e.to_dict() for e in events],
            }

    def get_events(self, task_id: str, since_seq: int = 0, limit: int = 100) -> dict[str, Any]:
        runtime = self.get(task_id)
        with runtime.lock:
            events = [e.to_dict() for e in runtime.log.events[since_seq : since_seq + limit]]
            total = len(runtime.log)
        next_seq = since_seq + len(events)
        return {"events": events, "next_seq": next_seq, "total": total}

    def list_gates(self, assignee: str | None = None) -> list[dict[str, Any]]:
        """Pending intervention requests (step gates + offline-QA escalations)."""
        gates = []
        for task_id in sorted(self._tasks):
            runtime = self._tasks[task_id]
            with runtime.lock:
                state = runtime.state
                plan = runtime.plan
                expert = state.worker_for("expert")
                if assignee is not None and expert not in (None, assignee):
                    continue
                # one card per pending step, stamped with its latest request
                # (a rejected gate gets re-requested; earlier rounds are history)
                latest_request: dict[int, int] = {}
                for event in runtime.log:
                    if event.kind is EventKind.GATE_REQUESTED and event.payload.get("step_index") in state.pending_gates:
                        latest_request[event.payload["step_index"]] = event.wall_time
                for i in sorted(latest_request):
                    step = plan.step(i) if plan else None
                    gates.append(
                        {
                            "gate_id": f"{task_id}:{i}",
                            "task_id": task_id,
                            "kind": "step_gate",
                            "step_index": i,
                            "description": step.description if step else "",
                            "risk": step.risk.value if step else "",
                            "requested_at": latest_request[i],
                            "task_summary": runtime.brief.brief_text[:140],
                            "version": state.version,
                            "attachments": sorted(runtime.driver.files),
                        }
                    )
                if state.qa_escalated:
                    escalation = next(
                        e for e in reversed(runtime.log.events) if e.kind is EventKind.QA_ESCALATED_TO_HUMAN
                    )
                    gates.append(
                        {
                            "gate_id": f"{task_id}:{QA_GATE_SUFFIX}",
                            "task_id": task_id,
                            "kind": "qa_escalation",
                            "step_index": None,
                            "description": "offline verification escalated: review and approve or return for rework",
                            "risk": "high",
                            "requested_at": escalation.wall_time,
                            "task_summary": runtime.brief.brief_text[:140],
                            "version": state.version,
                            "attachments": sorted(runtime.driver.files),
                        }
                    )
        gates.sort(key=lambda g: (g["requested_at"], g["gate_id"]))
        return gates

    def post_gate_decision(self, gate_id: str, body: dict[str, Any], decided_by: str) -> dict[str, Any]:
        task_id, _, gate_part = gate_id.partition(":")
        runtime = self.get(task_id)
        with runtime.lock:
            expected = body.get("expected_version")
            if expected is not None and expected != runtime.state.version:
                raise Conflict(f"task version is {runtime.state.version}, request expected {expected}")
            if gate_part == QA_GATE_SUFFIX:
                if not runtime.state.qa_escalated:
                    raise Conflict("offline-QA escalation already resolved")
                choice = body.get("decision", "")
                if choice == "approve":
                    runtime.driver.resume_with_qa(True, body.get("notes", ""))
                elif choice == "reject_with_notes":
                    notes = (body.get("notes") or "").strip()
                    if not notes:
                        raise ValidationFailed("rejection requires notes")
                    runtime.driver.resume_with_qa(False, notes)
                else:
                    raise ValidationFailed(f"qa escalations accept approve/reject_with_notes, got {choice!r}")
            else:
                try:
                    step_index = int(gate_part)
                except ValueError as exc:
                    raise NotFound(f"bad gate id {gate_id!r}") from exc
                if step_index not in runtime.state.pending_gates:
                    raise Conflict(f"gate {gate_id} is not pending (already decided?)")
                try:
                    decision = GateDecision(
                        step_index=step_index,
                        decision=GateChoice(body.get("decision", "")),
                        notes=body.get("notes", ""),
                        decided_by=decided_by,
                        decided_at=self.clock.now_ms(),
                        edited_description=body.get("edited_description", ""),
                    )
                except ValueError as exc:
                    raise ValidationFailed(str(exc)) from exc
                try:
                    runtime.driver.resume_with_gate(decision)
                except NoPendingGate as exc:
                    raise Conflict(str(exc)) from exc
            self._persist_deliverables(runtime)
            return {
                "task_id": task_id,
                "state": runtime.state.to_dict(),
                "status": runtime.driver.status.value,
            }

    def upload_deliverable(self, task_id: str, body: dict[str, Any], actor: str) -> dict[str, Any]:
        runtime = self.get(task_id)
        with runtime.lock:
            if runtime.state.phase not in (Phase.EXECUTING, Phase.ONLINE_QA):
                raise Conflict(f"deliverables can only be uploaded during execution, task is {runtime.state.phase.value}")
            output = StepOutput(
                summary=body.get("summary", ""),
                files=tuple(
                    {
                        "name": safe_file_name(f["name"]),
                        "media_kind": f.get("media_kind", "other"),
                        "content": f.get("content", ""),
                    }
                    for f in body.get("files", [])
                ),
                citations=tuple(Citation.from_dict(c) for c in body.get("citations", [])),
            )
            runtime.driver.record_external_deliverable(
                output, Actor.EXPERT if actor != "client" else Actor.CLIENT
            )
            self._persist_deliverables(runtime)
            return {"task_id": task_id, "state": runtime.state.to_dict(), "files": sorted(runtime.driver.files)}

    def state_hash(self) -> str:
        """Order-independent digest of every task's replayed state."""
        parts = []
        for task_id in sorted(self._tasks):
            runtime = self._tasks[task_id]
            with runtime.lock:
                parts.append(f"{task_id}={runtime.state.to_json()}")
        return sha256_hex("\n".join(parts).encode("utf-8"))
