"""Skill-based routing and matching."""

from __future__ import annotations

from typing import NamedTuple, Sequence

from gatework.errors import NoMatch
from gatework.orchestration.plan import RoutingRequest
from gatework.workers.profiles import WorkerKind, WorkerProfile


class Match(NamedTuple):
    worker_id: str
    time_estimate_h: float


def match_worker(
    req: RoutingRequest,
    pool: Sequence[WorkerProfile],
    base_hours: float = 1.0,
    kinds: frozenset[WorkerKind] | None = None,
) -> Match:
    """Cheapest qualified worker; deterministic under pool permutation.

    Qualified = skills cover the request (optionally restricted to worker
    kinds). Tie-break: lower cost rate, earlier availability, lexicographic
    id. The time estimate scales template base hours by the worker's speed.
    """
    candidates = [
        p
        for p in pool
        if p.covers(req.required_skills) and (kinds is None or p.kind in kinds)
    ]
    if not candidates:
        raise NoMatch(f"no worker covers skills {sorted(req.required_skills)}")
    chosen = min(candidates, key=lambda p: (p.cost_rate, p.availability_at, p.worker_id))
    return Match(worker_id=chosen.worker_id, time_estimate_h=base_hours / chosen.speed_factor)
