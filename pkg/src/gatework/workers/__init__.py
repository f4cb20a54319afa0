from gatework.workers.handles import (
    ConsoleHumanWorker,
    ExecutionContext,
    ScriptedWorker,
    StepOutput,
    SyntheticWorker,
    WorkerHandle,
    perform_step,
)
from gatework.workers.profiles import Bid, WorkerKind, WorkerProfile, load_worker_pool, marketplace_select
from gatework.workers.synthetic import LognormalSpec, Outcome, SyntheticWorkerModel, sample_outcome, substream

__all__ = [
    "Bid",
    "ConsoleHumanWorker",
    "ExecutionContext",
    "LognormalSpec",
    "Outcome",
    "ScriptedWorker",
    "StepOutput",
    "SyntheticWorker",
    "SyntheticWorkerModel",
    "WorkerHandle",
    "WorkerKind",
    "WorkerProfile",
    "load_worker_pool",
    "marketplace_select",
    "perform_step",
    "sample_outcome",
    "substream",
]
