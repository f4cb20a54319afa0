from gatework.core.log import AuditLog, append, read_events_file, replay, write_events_file
from gatework.core.machine import MachineConfig, apply_event, initial_state, legal_events
from gatework.core.types import (
    Actor,
    Area,
    AttachmentRef,
    AuditEvent,
    Citation,
    Deliverable,
    EventKind,
    MediaKind,
    Phase,
    TaskBrief,
    TaskState,
    TERMINAL_PHASES,
)

__all__ = [
    "Actor",
    "Area",
    "AttachmentRef",
    "AuditEvent",
    "AuditLog",
    "Citation",
    "Deliverable",
    "EventKind",
    "MachineConfig",
    "MediaKind",
    "Phase",
    "TERMINAL_PHASES",
    "TaskBrief",
    "TaskState",
    "append",
    "apply_event",
    "initial_state",
    "legal_events",
    "read_events_file",
    "replay",
    "write_events_file",
]
