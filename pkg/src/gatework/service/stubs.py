"""Built-in scripted workers for service mode.

The service exposes no real tool sandbox; AI-worker tool execution is
represented by scripted workers. When no fixture directory is configured
these stubs produce deterministic, QA-clean outputs so submitted tasks
flow through the whole loop (gates, online QA, offline QA) end to end.
"""

from __future__ import annotations

from gatework.orchestration.plan import TemplateLibrary
from gatework.workers.handles import ExecutionContext, StepOutput
from gatework.workers.profiles import WorkerKind, WorkerProfile

CONTACTS_CSV_HEADER = "company,email,employees"


def _contact_rows(task_id: str, n: int = 40) -> list[str]:
    return [f"comp-{task_id}-{i:02d},contact{i:02d}@example.com,{10 + i}" for i in range(n)]


def _stub_output(task_id: str, step_index: int, description: str, elapsed_h: float, rate: float) -> StepOutput:
    rows = _contact_rows(task_id)
    total = sum(10 + i for i in range(len(rows)))
    csv_text = "\n".join([CONTACTS_CSV_HEADER, *rows, f"TOTAL,,{total}"]) + "\n"
    report = (
        f"# Result for {task_id}\n\n"
        f"Step {step_index}: {description}\n\n"
        f"Compiled {len(rows)} contacts; totals reconciled.\n"
    )
    return StepOutput(
        summary=f"{description}: done",
        answer=f"ok:{task_id}:{step_index}",
        files=(
            {"name": "report.md", "media_kind": "document", "content": report},
            {"name": "contacts.csv", "media_kind": "spreadsheet", "content": csv_text},
        ),
        elapsed_h=elapsed_h,
        cost_usd=elapsed_h * rate,
    )


class StubWorker:
    """Deterministic worker producing clean tabular + report output."""

    def __init__(self, profile: WorkerProfile):
        self.profile = profile

    def perform(self, step, context: ExecutionContext) -> StepOutput:
        return _stub_output(
            context.task_id, step.index, step.description, step.base_hours, self.profile.cost_rate
        )


def default_pool(templates: TemplateLibrary) -> tuple[list[WorkerProfile], dict[str, StubWorker]]:
    """One stub AI agent and one stub expert covering every template skill."""
    skills = frozenset().union(*(templates.declared_skills(c) for c in templates.categories()))
    ai = WorkerProfile(worker_id="agent-0", kind=WorkerKind.AI, skills=skills, cost_rate=1.0, speed_factor=4.0)
    expert = WorkerProfile(worker_id="expert-0", kind=WorkerKind.EXPERT, skills=skills, cost_rate=15.0)
    qa = WorkerProfile(worker_id="qa-0", kind=WorkerKind.QA_EXPERT, skills=skills, cost_rate=18.0)
    pool = [ai, expert, qa]
    handles = {p.worker_id: StubWorker(p) for p in pool}
    return pool, handles
