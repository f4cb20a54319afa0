"""Worker profiles, the pool config file, and marketplace bid selection."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Sequence

from gatework.errors import NoAcceptableBid

MIN_JOB_SUCCESS = 0.80


class WorkerKind(str, Enum):
    AI = "ai"
    EXPERT = "expert"
    QA_EXPERT = "qa_expert"


@dataclass(frozen=True)
class WorkerProfile:
    """One worker the router can pick.

    For AI workers cost_rate is the usage cost per hour-equivalent of work;
    for humans it is the hourly rate. speed_factor scales template base
    hours down (2.0 = twice as fast).
    """

    worker_id: str
    kind: WorkerKind
    skills: frozenset[str]
    cost_rate: float
    speed_factor: float = 1.0
    availability_at: int = 0  # ms timestamp

    def __post_init__(self):
        object.__setattr__(self, "skills", frozenset(self.skills))
        if self.cost_rate < 0:
            raise ValueError("cost_rate must be >= 0")
        if self.speed_factor <= 0:
            raise ValueError("speed_factor must be > 0")

    def covers(self, required: frozenset[str]) -> bool:
        return required <= self.skills

    def to_dict(self) -> dict[str, Any]:
        return {
            "worker_id": self.worker_id,
            "kind": self.kind.value,
            "skills": sorted(self.skills),
            "cost_rate": self.cost_rate,
            "speed_factor": self.speed_factor,
            "availability_at": self.availability_at,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "WorkerProfile":
        return cls(
            worker_id=d["worker_id"],
            kind=WorkerKind(d["kind"]),
            skills=frozenset(d.get("skills", [])),
            cost_rate=float(d.get("cost_rate", 0.0)),
            speed_factor=float(d.get("speed_factor", 1.0)),
            availability_at=int(d.get("availability_at", 0)),
        )


def load_worker_pool(path: str | Path) -> list[WorkerProfile]:
    """Worker pool config: JSON file with a top-level ``workers`` list."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return [WorkerProfile.from_dict(w) for w in raw.get("workers", [])]


def load_pool_file(path: str | Path) -> tuple[list[WorkerProfile], dict[str, Any]]:
    """Pool file with optional synthetic model blocks keyed by name.

    Returns (profiles, models); models are parsed lazily to keep this
    module free of the synthetic-worker dependency.
    """
    from gatework.workers.synthetic import SyntheticWorkerModel

    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    profiles = [WorkerProfile.from_dict(w) for w in raw.get("workers", [])]
    models = {name: SyntheticWorkerModel.from_dict(m) for name, m in raw.get("models", {}).items()}
    return profiles, models


@dataclass(frozen=True)
class Bid:
    """A marketplace offer for one task."""

    bidder: WorkerProfile
    price: float
    job_success: float
    is_newcomer: bool = False

    def __post_init__(self):
        if self.price <= 0:
            raise ValueError("price must be positive")
        if not (0.0 <= self.job_success <= 1.0):
            raise ValueError("job_success must lie in [0, 1]")


def marketplace_select(bids: Sequence[Bid]) -> Bid:
    """Lowest acceptable offer, taken as-is.

    Acceptable = job_success >= 0.80 or a flagged newcomer. Ties broken by
    higher job_success, then bidder id. No price negotiation is modeled.
    """
    acceptable = [b for b in bids if b.job_success >= MIN_JOB_SUCCESS or b.is_newcomer]
    if not acceptable:
        raise NoAcceptableBid(f"none of {len(bids)} bids meet the success/newcomer bar")
    return min(acceptable, key=lambda b: (b.price, -b.job_success, b.bidder.worker_id))
