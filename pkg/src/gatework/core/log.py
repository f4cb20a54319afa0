"""Append-only audit log with NDJSON persistence.

A log is a value: ``append`` returns a new log and never mutates prior
entries. Task state is always recoverable by replaying the log from the
initial Submitted state. On disk, one event per line, UTF-8, named
``<task_id>.events``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from gatework.errors import SequenceGap
from gatework.core.machine import DEFAULT_CONFIG, MachineConfig, apply_event, initial_state
from gatework.core.types import AuditEvent, TaskState


@dataclass(frozen=True)
class AuditLog:
    events: tuple[AuditEvent, ...] = ()

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[AuditEvent]:
        return iter(self.events)

    def last(self) -> AuditEvent | None:
        return self.events[-1] if self.events else None


def append(log: AuditLog, event: AuditEvent) -> AuditLog:
    """Extend the log by one event; event.seq must equal len(log)."""
    if event.seq != len(log.events):
        raise SequenceGap(f"expected seq {len(log.events)}, got {event.seq}")
    return AuditLog(events=log.events + (event,))


def from_events(events: Iterable[AuditEvent]) -> AuditLog:
    log = AuditLog()
    for event in events:
        log = append(log, event)
    return log


def replay(log: AuditLog, config: MachineConfig = DEFAULT_CONFIG) -> TaskState:
    """Fold the machine over the log from the initial Submitted state.

    Raises IllegalTransition/TerminalState if the log is corrupt.
    """
    state = initial_state()
    for event in log.events:
        state = apply_event(state, event, config)
    return state


def write_events_file(path: str | Path, log: AuditLog) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for event in log.events:
            f.write(event.to_json_line())
            f.write("\n")


def read_events_file(path: str | Path) -> AuditLog:
    path = Path(path)
    events = []
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                events.append(AuditEvent.from_json_line(line))
    return from_events(events)
