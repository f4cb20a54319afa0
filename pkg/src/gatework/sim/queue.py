"""Deterministic discrete-event queue.

Total pop order: (virtual time, insertion sequence). Ties go to the
earlier insertion, so identical timestamps never make a run order-unstable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Any

from gatework.errors import EmptyQueue


@dataclass(frozen=True, order=True)
class QueuedEvent:
    time: float
    seq: int
    payload: Any = field(compare=False, default=None)


class EventQueue:
    def __init__(self):
        self._heap: list[QueuedEvent] = []
        self._next_seq = 0

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, time: float, payload: Any = None) -> QueuedEvent:
        event = QueuedEvent(time=float(time), seq=self._next_seq, payload=payload)
        self._next_seq += 1
        heapq.heappush(self._heap, event)
        return event


def advance(queue: EventQueue, now: float) -> tuple[QueuedEvent, float]:
    """Pop the earliest event and move the clock to it (never backwards)."""
    if not len(queue):
        raise EmptyQueue("advance() on an empty queue")
    event = heapq.heappop(queue._heap)
    if event.time < now:
        raise RuntimeError(f"event at t={event.time} is before now={now}; insertion bug")
    return event, event.time
