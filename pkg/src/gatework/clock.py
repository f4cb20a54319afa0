"""Injectable clocks.

Domain modules never read the wall clock themselves; the host hands in a
clock so replay and simulation stay deterministic. Timestamps are integer
milliseconds.
"""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now_ms(self) -> int: ...


class RealClock:
    """Wall clock, used by the service."""

    def now_ms(self) -> int:
        return int(time.time() * 1000)


class VirtualClock:
    """Manually advanced clock for simulation and tests."""

    def __init__(self, start_ms: int = 0):
        self._now = int(start_ms)

    def now_ms(self) -> int:
        return self._now

    def advance_ms(self, delta_ms: int) -> int:
        if delta_ms < 0:
            raise ValueError("clock cannot move backwards")
        self._now += int(delta_ms)
        return self._now

    def advance_hours(self, hours: float) -> int:
        return self.advance_ms(int(round(hours * 3_600_000)))
