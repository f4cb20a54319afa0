"""Plans, gated steps, and template-driven decomposition.

Decomposition is data-driven: one ordered step-template list per known
category plus a ``generic`` fallback, loaded from a JSON template library.
High-risk steps are always gated; the invariant is enforced at both
template load and step construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping

from gatework.core.log import AuditLog
from gatework.core.types import EventKind, TaskBrief
from gatework.errors import NoTemplate

GENERIC_CATEGORY = "generic"


class Risk(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class StepStatus(str, Enum):
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    DONE = "done"
    REWORKED = "reworked"


class GateChoice(str, Enum):
    APPROVE = "approve"
    REJECT_WITH_NOTES = "reject_with_notes"
    EDIT_AND_APPROVE = "edit_and_approve"


class EscalationKind(str, Enum):
    CONFLICTING_SOURCES = "conflicting_sources"
    FAILED_CHECKS = "failed_checks"
    HIGH_RISK_STEP = "high_risk_step"
    LOW_SELF_CONSISTENCY = "low_self_consistency"


@dataclass(frozen=True)
class EscalationReason:
    kind: EscalationKind
    detail: str = ""


@dataclass(frozen=True)
class RoutingRequest:
    required_skills: frozenset[str]
    deadline_hint_h: float | None = None
    budget_hint_usd: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "required_skills", frozenset(self.required_skills))
        if not self.required_skills:
            raise ValueError("required_skills must be non-empty")


@dataclass(frozen=True)
class PlanStep:
    index: int
    description: str
    required_skills: frozenset[str]
    risk: Risk
    gated: bool
    status: StepStatus = StepStatus.PENDING
    base_hours: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "required_skills", frozenset(self.required_skills))
        object.__setattr__(self, "risk", Risk(self.risk))
        object.__setattr__(self, "status", StepStatus(self.status))
        if self.risk is Risk.HIGH and not self.gated:
            raise ValueError(f"high-risk step {self.index} must be gated")
        if self.base_hours <= 0:
            raise ValueError("base_hours must be positive")

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "description": self.description,
            "skills": sorted(self.required_skills),
            "risk": self.risk.value,
            "gated": self.gated,
            "status": self.status.value,
            "base_hours": self.base_hours,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "PlanStep":
        return cls(
            index=int(d["index"]),
            description=d.get("description", ""),
            required_skills=frozenset(d.get("skills", [])),
            risk=Risk(d.get("risk", "low")),
            gated=bool(d.get("gated", False)),
            status=StepStatus(d.get("status", "pending")),
            base_hours=float(d.get("base_hours", 1.0)),
        )


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...]
    created_from: str
    revision: int = 0

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("plan must have at least one step")
        for pos, step in enumerate(self.steps):
            if step.index != pos:
                raise ValueError("step indices must be contiguous from 0")

    def step(self, index: int) -> PlanStep:
        return self.steps[index]

    def with_step(self, index: int, **changes: Any) -> "Plan":
        steps = list(self.steps)
        steps[index] = replace(steps[index], **changes)
        return replace(self, steps=tuple(steps))

    def skills_union(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for step in self.steps:
            out |= step.required_skills
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "created_from": self.created_from,
            "revision": self.revision,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Plan":
        return cls(
            steps=tuple(PlanStep.from_dict(s) for s in d.get("steps", [])),
            created_from=d.get("created_from", ""),
            revision=int(d.get("revision", 0)),
        )


@dataclass(frozen=True)
class GateDecision:
    step_index: int
    decision: GateChoice
    notes: str
    decided_by: str
    decided_at: int  # ms timestamp
    edited_description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "decision", GateChoice(self.decision))
        if self.decision is GateChoice.REJECT_WITH_NOTES and not self.notes.strip():
            raise ValueError("rejection requires notes")
        if self.decision is GateChoice.EDIT_AND_APPROVE and not self.edited_description.strip():
            raise ValueError("edit_and_approve requires the edited description")


class TemplateLibrary:
    """category -> ordered step templates; validated at load."""

    def __init__(self, templates: Mapping[str, Iterable[Mapping[str, Any]]]):
        self._templates: dict[str, tuple[dict[str, Any], ...]] = {}
        for category, steps in templates.items():
            validated = []
            for pos, raw in enumerate(steps):
                risk = Risk(raw.get("risk", "low"))
                gated = bool(raw.get("gated", False))
                if risk is Risk.HIGH and not gated:
                    raise ValueError(f"template {category!r} step {pos}: high risk must be gated")
                validated.append(
                    {
                        "description": raw["description"],
                        "skills": sorted(raw.get("skills", [])),
                        "risk": risk.value,
                        "gated": gated,
                        "base_hours": float(raw.get("base_hours", 1.0)),
                    }
                )
            if not validated:
                raise ValueError(f"template {category!r} has no steps")
            self._templates[category] = tuple(validated)

    @classmethod
    def from_file(cls, path: str | Path) -> "TemplateLibrary":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def categories(self) -> tuple[str, ...]:
        return tuple(sorted(self._templates))

    def lookup(self, category: str) -> tuple[dict[str, Any], ...] | None:
        if category in self._templates:
            return self._templates[category]
        return self._templates.get(GENERIC_CATEGORY)

    def declared_skills(self, category: str) -> frozenset[str]:
        steps = self.lookup(category) or ()
        out: set[str] = set()
        for step in steps:
            out.update(step["skills"])
        return frozenset(out)


def decompose(brief: TaskBrief, templates: TemplateLibrary) -> Plan:
    """Instantiate the category's step templates as a fresh plan."""
    steps = templates.lookup(brief.category)
    if steps is None:
        raise NoTemplate(f"no template for category {brief.category!r} and no generic fallback")
    plan_steps = tuple(
        PlanStep(
            index=pos,
            description=t["description"],
            required_skills=frozenset(t["skills"]),
            risk=Risk(t["risk"]),
            gated=t["gated"],
            base_hours=t["base_hours"],
        )
        for pos, t in enumerate(steps)
    )
    return Plan(steps=plan_steps, created_from=brief.digest(), revision=0)


def plan_from_log(log: AuditLog) -> Plan | None:
    """Reconstruct the current plan (descriptions, statuses, revision) from events."""
    plan: Plan | None = None
    for event in log:
        kind, payload = event.kind, event.payload
        if kind is EventKind.PLAN_COMMITTED:
            plan = Plan.from_dict(payload)
        elif plan is None:
            continue
        elif kind is EventKind.STEP_STARTED:
            plan = plan.with_step(payload["step_index"], status=StepStatus.IN_PROGRESS)
        elif kind is EventKind.STEP_COMPLETED:
            plan = plan.with_step(payload["step_index"], status=StepStatus.DONE)
        elif kind is EventKind.GATE_REJECTED:
            plan = replace(
                plan.with_step(payload["step_index"], status=StepStatus.REWORKED), revision=plan.revision + 1
            )
        elif kind is EventKind.GATE_EDITED:
            plan = replace(
                plan.with_step(payload["step_index"], description=payload.get("new_description", "")),
                revision=plan.revision + 1,
            )
        elif kind is EventKind.ONLINE_QA_FAILED and "step_index" in payload:
            plan = plan.with_step(payload["step_index"], status=StepStatus.REWORKED)
        elif kind is EventKind.QA_FAILED_REWORK:
            for i in payload.get("rework_steps", []):
                plan = plan.with_step(i, status=StepStatus.REWORKED)
    return plan
