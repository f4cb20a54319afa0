"""Domain types for the task lifecycle.

All types are immutable values with lossless dict/JSON round-trips.
Unknown payload fields on audit events are preserved verbatim so stored
logs stay forward compatible.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping


class Area(str, Enum):
    SALES = "Sales"
    OPERATIONS = "Operations"
    MARKETING = "Marketing"
    ANALYSIS = "Analysis"


class MediaKind(str, Enum):
    SPREADSHEET = "spreadsheet"
    DOCUMENT = "document"
    LINK = "link"
    OTHER = "other"


class Phase(str, Enum):
    SUBMITTED = "submitted"
    CLARIFYING = "clarifying"
    PLANNING = "planning"
    ROUTING = "routing"
    EXECUTING = "executing"
    ONLINE_QA = "online_qa"
    OFFLINE_QA = "offline_qa"
    REWORK = "rework"
    FINALIZED = "finalized"
    DECLINED = "declined"


TERMINAL_PHASES = frozenset({Phase.FINALIZED, Phase.DECLINED})


class Actor(str, Enum):
    SYSTEM = "system"
    AI_WORKER = "ai_worker"
    EXPERT = "expert"
    QA_EXPERT = "qa_expert"
    CLIENT = "client"


class EventKind(str, Enum):
    TASK_SUBMITTED = "task_submitted"
    CLARIFICATION_STARTED = "clarification_started"
    CLARIFICATION_ROUND_COMPLETED = "clarification_round_completed"
    PLANNING_STARTED = "planning_started"
    PLAN_COMMITTED = "plan_committed"
    WORKER_ASSIGNED = "worker_assigned"
    STEP_STARTED = "step_started"
    STEP_COMPLETED = "step_completed"
    GATE_REQUESTED = "gate_requested"
    GATE_APPROVED = "gate_approved"
    GATE_REJECTED = "gate_rejected"
    GATE_EDITED = "gate_edited"
    ESCALATION_RAISED = "escalation_raised"
    DELIVERABLE_RECORDED = "deliverable_recorded"
    ONLINE_QA_STARTED = "online_qa_started"
    ONLINE_QA_PASSED = "online_qa_passed"
    ONLINE_QA_FAILED = "online_qa_failed"
    OFFLINE_QA_STARTED = "offline_qa_started"
    QA_PASSED = "qa_passed"
    QA_FAILED_REWORK = "qa_failed_rework"
    QA_ESCALATED_TO_HUMAN = "qa_escalated_to_human"
    REWORK_STARTED = "rework_started"
    TASK_DECLINED = "task_declined"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def canonical_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, compact separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class AttachmentRef:
    """Reference to an attached file, link, or recorded source."""

    name: str
    media_kind: MediaKind
    content_hash: str
    uri: str

    @classmethod
    def from_bytes(cls, name: str, media_kind: MediaKind, data: bytes, uri: str = "") -> "AttachmentRef":
        return cls(name=name, media_kind=media_kind, content_hash=sha256_hex(data), uri=uri or name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "media_kind": self.media_kind.value,
            "content_hash": self.content_hash,
            "uri": self.uri,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "AttachmentRef":
        return cls(
            name=d["name"],
            media_kind=MediaKind(d["media_kind"]),
            content_hash=d["content_hash"],
            uri=d["uri"],
        )


@dataclass(frozen=True)
class TaskBrief:
    """Client request: what to do, with which materials, judged how."""

    task_id: str
    area: Area
    category: str
    brief_text: str
    attachments: tuple[AttachmentRef, ...] = ()
    acceptance_criteria: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.task_id:
            raise ValueError("task_id must be non-empty")
        object.__setattr__(self, "attachments", tuple(self.attachments))
        object.__setattr__(self, "acceptance_criteria", tuple(self.acceptance_criteria))

    def digest(self) -> str:
        return sha256_hex(canonical_json(self.to_dict()).encode("utf-8"))

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "area": self.area.value,
            "category": self.category,
            "brief_text": self.brief_text,
            "attachments": [a.to_dict() for a in self.attachments],
            "acceptance_criteria": list(self.acceptance_criteria),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TaskBrief":
        return cls(
            task_id=d["task_id"],
            area=Area(d["area"]),
            category=d["category"],
            brief_text=d["brief_text"],
            attachments=tuple(AttachmentRef.from_dict(a) for a in d.get("attachments", [])),
            acceptance_criteria=tuple(d.get("acceptance_criteria", [])),
        )


@dataclass(frozen=True)
class Citation:
    """Binds a claim in the deliverable to a supporting source."""

    claim_span: str
    source_ref: str

    def to_dict(self) -> dict[str, Any]:
        return {"claim_span": self.claim_span, "source_ref": self.source_ref}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Citation":
        return cls(claim_span=d["claim_span"], source_ref=d["source_ref"])


@dataclass(frozen=True)
class Deliverable:
    """Output of one or more steps, as handed to QA.

    Citations are represented, not validated, at construction; the QA layer
    is what decides whether a source_ref actually resolves.
    """

    files: tuple[AttachmentRef, ...]
    summary: str
    citations: tuple[Citation, ...]
    produced_by: Actor
    step_index: int

    def __post_init__(self):
        object.__setattr__(self, "files", tuple(self.files))
        object.__setattr__(self, "citations", tuple(self.citations))

    def to_dict(self) -> dict[str, Any]:
        return {
            "files": [f.to_dict() for f in self.files],
            "summary": self.summary,
            "citations": [c.to_dict() for c in self.citations],
            "produced_by": self.produced_by.value,
            "step_index": self.step_index,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Deliverable":
        return cls(
            files=tuple(AttachmentRef.from_dict(f) for f in d.get("files", [])),
            summary=d.get("summary", ""),
            citations=tuple(Citation.from_dict(c) for c in d.get("citations", [])),
            produced_by=Actor(d.get("produced_by", "system")),
            step_index=int(d.get("step_index", 0)),
        )


@dataclass(frozen=True)
class AuditEvent:
    """One immutable entry in a task's append-only history."""

    seq: int
    wall_time: int
    actor: Actor
    kind: EventKind
    payload: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "seq": self.seq,
            "wall_time": self.wall_time,
            "actor": self.actor.value,
            "kind": self.kind.value,
            "payload": dict(self.payload),
        }

    def to_json_line(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "AuditEvent":
        return cls(
            seq=int(d["seq"]),
            wall_time=int(d["wall_time"]),
            actor=Actor(d["actor"]),
            kind=EventKind(d["kind"]),
            payload=dict(d.get("payload", {})),
        )

    @classmethod
    def from_json_line(cls, line: str) -> "AuditEvent":
        return cls.from_dict(json.loads(line))


@dataclass(frozen=True)
class TaskState:
    """Current state of one task, replayable from its audit log.

    Beyond the externally visible fields (phase, version, current_step,
    assigned_workers) the state carries the bookkeeping the machine needs
    to police gate ordering: which steps are gated, done, approved, or
    waiting on a decision.
    """

    phase: Phase = Phase.SUBMITTED
    version: int = 0
    current_step: int | None = None
    assigned_workers: tuple[tuple[str, str], ...] = ()  # (role, worker_id), sorted by role
    clarify_rounds: int = 0
    step_gated: tuple[bool, ...] = ()
    steps_done: frozenset[int] = frozenset()
    approved_gates: frozenset[int] = frozenset()
    pending_gates: frozenset[int] = frozenset()
    qa_escalated: bool = False

    @property
    def terminal(self) -> bool:
        return self.phase in TERMINAL_PHASES

    def worker_for(self, role: str) -> str | None:
        for r, w in self.assigned_workers:
            if r == role:
                return w
        return None

    def n_steps(self) -> int:
        return len(self.step_gated)

    def to_dict(self) -> dict[str, Any]:
        return {
            "phase": self.phase.value,
            "version": self.version,
            "current_step": self.current_step,
            "assigned_workers": {r: w for r, w in self.assigned_workers},
            "clarify_rounds": self.clarify_rounds,
            "step_gated": list(self.step_gated),
            "steps_done": sorted(self.steps_done),
            "approved_gates": sorted(self.approved_gates),
            "pending_gates": sorted(self.pending_gates),
            "qa_escalated": self.qa_escalated,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TaskState":
        return cls(
            phase=Phase(d["phase"]),
            version=int(d["version"]),
            current_step=d.get("current_step"),
            assigned_workers=tuple(sorted(d.get("assigned_workers", {}).items())),
            clarify_rounds=int(d.get("clarify_rounds", 0)),
            step_gated=tuple(bool(g) for g in d.get("step_gated", [])),
            steps_done=frozenset(d.get("steps_done", [])),
            approved_gates=frozenset(d.get("approved_gates", [])),
            pending_gates=frozenset(d.get("pending_gates", [])),
            qa_escalated=bool(d.get("qa_escalated", False)),
        )
