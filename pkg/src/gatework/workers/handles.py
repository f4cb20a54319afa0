"""Concrete worker adapters behind one ``perform`` interface.

Three families:

- ``ScriptedWorker``: returns fixture outputs keyed by (task_id, step
  index); the deterministic stand-in for the real AI agent and its tools.
- ``SyntheticWorker``: wraps a stochastic model; used by the simulator.
- ``ConsoleHumanWorker``: bridges a human over stdio streams.

``perform_step`` is the checked entry point: it enforces the skill
contract before delegating to the handle.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping, Protocol, TYPE_CHECKING

import numpy as np

from gatework.core.types import Citation
from gatework.errors import SkillMismatch, WorkerUnavailable
from gatework.quality import Grade
from gatework.workers.profiles import WorkerProfile
from gatework.workers.synthetic import Outcome, SyntheticWorkerModel, sample_outcome

if TYPE_CHECKING:
    from gatework.orchestration.plan import PlanStep


@dataclass(frozen=True)
class ExecutionContext:
    task_id: str
    attempt: int = 0
    brief_text: str = ""


@dataclass(frozen=True)
class StepOutput:
    """Deliverable delta plus the time and money the step consumed."""

    summary: str
    answer: str = ""
    files: tuple[dict[str, str], ...] = ()  # name, media_kind, content
    citations: tuple[Citation, ...] = ()
    recorded_sources: tuple[tuple[str, str], ...] = ()  # (name, text)
    elapsed_h: float = 0.0
    cost_usd: float = 0.0

    def to_dict(self) -> dict:
        return {
            "summary": self.summary,
            "answer": self.answer,
            "files": list(self.files),
            "citations": [c.to_dict() for c in self.citations],
            "recorded_sources": [list(s) for s in self.recorded_sources],
            "elapsed_h": self.elapsed_h,
            "cost_usd": self.cost_usd,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "StepOutput":
        return cls(
            summary=d.get("summary", ""),
            answer=d.get("answer", ""),
            files=tuple(dict(f) for f in d.get("files", [])),
            citations=tuple(Citation.from_dict(c) for c in d.get("citations", [])),
            recorded_sources=tuple((s[0], s[1]) for s in d.get("recorded_sources", [])),
            elapsed_h=float(d.get("elapsed_h", 0.0)),
            cost_usd=float(d.get("cost_usd", 0.0)),
        )


class WorkerHandle(Protocol):
    profile: WorkerProfile

    def perform(self, step: "PlanStep", context: ExecutionContext) -> StepOutput: ...


def perform_step(worker: WorkerHandle, step: "PlanStep", context: ExecutionContext) -> StepOutput:
    """Run one step on a worker after checking the skill contract."""
    required = frozenset(step.required_skills)
    if not worker.profile.covers(required):
        missing = sorted(required - worker.profile.skills)
        raise SkillMismatch(f"worker {worker.profile.worker_id} lacks skills {missing}")
    return worker.perform(step, context)


class ScriptedWorker:
    """Fixture-backed worker.

    Scripts map (task_id, step_index) to one StepOutput or a list of them;
    a list is cycled per call so redundant runs can disagree on purpose.
    A ``default`` task key serves steps of tasks without their own fixtures
    (service task ids are generated, so directory fixtures rely on it).
    """

    DEFAULT_TASK = "default"

    def __init__(self, profile: WorkerProfile, scripts: Mapping[tuple[str, int], StepOutput | list[StepOutput]]):
        self.profile = profile
        self._scripts = dict(scripts)
        self._calls: dict[tuple[str, int], int] = {}

    @classmethod
    def from_dir(cls, profile: WorkerProfile, root: str | Path) -> "ScriptedWorker":
        """Load fixtures laid out as <task_id>/<step_index>/output.json."""
        scripts: dict[tuple[str, int], StepOutput | list[StepOutput]] = {}
        root = Path(root)
        for out_file in sorted(root.glob("*/*/output.json")):
            step_dir = out_file.parent
            key = (step_dir.parent.name, int(step_dir.name))
            raw = json.loads(out_file.read_text(encoding="utf-8"))
            if isinstance(raw, list):
                scripts[key] = [StepOutput.from_dict(r) for r in raw]
            else:
                scripts[key] = StepOutput.from_dict(raw)
        return cls(profile, scripts)

    def perform(self, step: "PlanStep", context: ExecutionContext) -> StepOutput:
        key = (context.task_id, step.index)
        if key not in self._scripts:
            key = (self.DEFAULT_TASK, step.index)
        if key not in self._scripts:
            raise WorkerUnavailable(f"no script for task {context.task_id!r} step {step.index}")
        fixture = self._scripts[key]
        if isinstance(fixture, list):
            call = self._calls.get(key, 0)
            self._calls[key] = call + 1
            return fixture[call % len(fixture)]
        return fixture


class SyntheticWorker:
    """Model-driven worker; output text is a pure function of the draw."""

    def __init__(self, profile: WorkerProfile, model: SyntheticWorkerModel, rng: np.random.Generator):
        self.profile = profile
        self.model = model
        self._rng = rng
        self.last_outcome: Outcome | None = None

    def perform(self, step: "PlanStep", context: ExecutionContext) -> StepOutput:
        outcome = sample_outcome(self.model, self._rng)
        self.last_outcome = outcome
        if outcome.declined:
            raise WorkerUnavailable(f"worker {self.profile.worker_id} declined step {step.index}")
        if outcome.quality is Grade.GOOD:
            answer = f"answer:{context.task_id}:{step.index}"
        elif outcome.quality is Grade.MEDIOCRE:
            answer = f"answer:{context.task_id}:{step.index}:rough"
        else:
            answer = f"answer:{context.task_id}:{step.index}:wrong-{outcome.exec_h:.3f}"
        return StepOutput(
            summary=f"{step.description} ({outcome.quality.value.lower()} draw)",
            answer=answer,
            elapsed_h=outcome.exec_h,
            cost_usd=outcome.cost_usd,
        )


class ConsoleHumanWorker:
    """Human bridge over stdio: prints the step, reads summary and hours."""

    def __init__(self, profile: WorkerProfile, stdin: IO[str] | None = None, stdout: IO[str] | None = None):
        self.profile = profile
        self._in = stdin or sys.stdin
        self._out = stdout or sys.stdout

    def perform(self, step: "PlanStep", context: ExecutionContext) -> StepOutput:
        self._out.write(f"[task {context.task_id}] step {step.index}: {step.description}\n")
        self._out.write("enter result summary (single line): ")
        self._out.flush()
        summary = self._in.readline().strip()
        if not summary:
            raise WorkerUnavailable("no console input")
        self._out.write("hours spent: ")
        self._out.flush()
        try:
            hours = float(self._in.readline().strip() or "0")
        except ValueError:
            hours = 0.0
        return StepOutput(
            summary=summary,
            answer=summary,
            elapsed_h=hours,
            cost_usd=hours * self.profile.cost_rate,
        )
