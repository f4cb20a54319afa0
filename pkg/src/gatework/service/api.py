"""HTTP API over the task store.

Wire protocol: JSON request/response bodies wrapped in an envelope that
carries exactly one of ``payload`` or ``error`` plus the request id (from
the X-Request-Id header or generated). Domain errors map to stable codes;
racing gate decisions lose with 409/conflict. Expert identity rides the
static X-Expert-Id header (no further auth by design).
"""

from __future__ import annotations

import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from gatework.errors import (
    Conflict,
    GateworkError,
    ManifestInvalid,
    NoPendingGate,
    NoRecords,
    NotFound,
    SystemMismatch,
    ValidationFailed,
)
from gatework.service.store import TaskStore
from gatework.stats import frontier_points, quality_shares, read_results_file, summarize_time_price

HTTP_STATUS = {
    NotFound: 404,
    Conflict: 409,
    NoPendingGate: 409,
    ValidationFailed: 400,
    ManifestInvalid: 400,
    NoRecords: 404,
    SystemMismatch: 400,
}


def _request_id(request: Request) -> str:
    return request.headers.get("x-request-id") or uuid.uuid4().hex


def envelope(request: Request, payload: Any) -> JSONResponse:
    return JSONResponse({"request_id": _request_id(request), "payload": payload})


def error_envelope(request: Request, exc: GateworkError, status: int) -> JSONResponse:
    return JSONResponse(
        {"request_id": _request_id(request), "error": {"code": exc.code, "message": str(exc)}},
        status_code=status,
    )


def create_app(store: TaskStore, console_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="gatework", docs_url=None, redoc_url=None)

    @app.exception_handler(GateworkError)
    async def handle_domain_error(request: Request, exc: GateworkError):
        for klass, status in HTTP_STATUS.items():
            if isinstance(exc, klass):
                return error_envelope(request, exc, status)
        return error_envelope(request, exc, 400)

    @app.post("/api/tasks")
    async def submit_task(request: Request):
        body = await request.json()
        task_id, state = store.submit_task(body.get("brief", body))
        return envelope(request, {"task_id": task_id, "state": state.to_dict()})

    @app.get("/api/tasks")
    async def list_tasks(request: Request):
        return envelope(request, {"task_ids": store.task_ids()})

    @app.get("/api/tasks/{task_id}")
    async def get_task(request: Request, task_id: str):
        return envelope(request, store.get_task_view(task_id))

    @app.get("/api/tasks/{task_id}/events")
    async def get_events(request: Request, task_id: str, since_seq: int = 0, limit: int = 100):
        return envelope(request, store.get_events(task_id, since_seq=since_seq, limit=limit))

    @app.get("/api/gates")
    async def list_gates(request: Request, assignee: str | None = None):
        return envelope(request, {"gates": store.list_gates(assignee)})

    @app.post("/api/gates/{gate_id}/decision")
    async def post_gate_decision(request: Request, gate_id: str):
        body = await request.json()
        decided_by = request.headers.get("x-expert-id", "expert-anon")
        return envelope(request, store.post_gate_decision(gate_id, body, decided_by))

    @app.post("/api/tasks/{task_id}/deliverables")
    async def upload_deliverable(request: Request, task_id: str):
        body = await request.json()
        actor = request.headers.get("x-expert-id", "client")
        return envelope(request, store.upload_deliverable(task_id, body, actor))

    def _results_path(results: str) -> Path:
        path = (store.root / results).resolve()
        if not str(path).startswith(str(store.root.resolve())):
            raise ValidationFailed("results path must stay inside the store root")
        if not path.is_file():
            raise NotFound(f"no results file at {results!r}")
        return path

    def _read_results(results: str):
        try:
            return read_results_file(_results_path(results))
        except ValueError as exc:
            raise ValidationFailed(str(exc)) from exc

    @app.get("/api/stats/shares")
    async def stats_shares(request: Request, results: str, system: str, criterion: str = "Overall"):
        records = _read_results(results)
        shares = quality_shares(records, system, criterion)
        return envelope(
            request,
            {
                "system": system,
                "criterion": criterion,
                "shares": {g.value: {"pct": e.pct, "pct_se": e.pct_se, "n": e.n} for g, e in shares.items()},
            },
        )

    @app.get("/api/stats/summary")
    async def stats_summary(request: Request, results: str, system: str, replicates: int = 2000):
        records = _read_results(results)
        row = summarize_time_price(records, system, n_replicates=replicates)
        return envelope(request, row.to_dict())

    @app.get("/api/stats/frontier")
    async def stats_frontier(request: Request, results: str, replicates: int = 1000):
        records = _read_results(results)
        systems = sorted({r.system_id for r in records})
        summaries = {s: summarize_time_price(records, s, n_replicates=replicates) for s in systems}
        shares = {s: quality_shares(records, s, "Overall") for s in systems}
        points = frontier_points(summaries, shares)
        return envelope(
            request,
            {"points": [{"system": p.system_id, "median_total_h": p.median_total_h, "pct_good": p.pct_good} for p in points]},
        )

    @app.get("/api/admin/state-hash")
    async def state_hash(request: Request):
        return envelope(request, {"state_hash": store.state_hash(), "task_count": len(store.task_ids())})

    if console_dir is not None and Path(console_dir).is_dir():
        app.mount("/console", StaticFiles(directory=str(console_dir), html=True), name="console")

    return app
