from gatework.orchestration.driver import DriverConfig, DriverStatus, TaskDriver
from gatework.orchestration.loop import (
    Action,
    Assignment,
    Escalate,
    ExecuteStep,
    Finalize,
    GateOutcome,
    LoopConfig,
    RequestGate,
    RunOnlineQA,
    StartOfflineQA,
    escalate,
    handle_gate_decision,
    next_action,
)
from gatework.orchestration.plan import (
    EscalationKind,
    EscalationReason,
    GateChoice,
    GateDecision,
    Plan,
    PlanStep,
    Risk,
    RoutingRequest,
    StepStatus,
    TemplateLibrary,
    decompose,
    plan_from_log,
)
from gatework.orchestration.routing import Match, match_worker

__all__ = [
    "Action",
    "Assignment",
    "DriverConfig",
    "DriverStatus",
    "Escalate",
    "EscalationKind",
    "EscalationReason",
    "ExecuteStep",
    "Finalize",
    "GateChoice",
    "GateDecision",
    "GateOutcome",
    "LoopConfig",
    "Match",
    "Plan",
    "PlanStep",
    "RequestGate",
    "Risk",
    "RoutingRequest",
    "RunOnlineQA",
    "StartOfflineQA",
    "StepStatus",
    "TaskDriver",
    "TemplateLibrary",
    "decompose",
    "escalate",
    "handle_gate_decision",
    "match_worker",
    "next_action",
    "plan_from_log",
]
