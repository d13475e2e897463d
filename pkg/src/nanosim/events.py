"""Deterministic discrete event queue."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Any, Callable


@dataclass(order=True)
class Event:
    time: float
    seq: int
    handler: Callable = field(compare=False)
    payload: Any = field(compare=False, default=None)


class EventQueue:
    """Min-heap of timed events.

    Ties on time break on the insertion sequence number, so two events
    scheduled for the same instant always run in the order they were pushed.
    """

    def __init__(self):
        self._heap: list[Event] = []
        self._seq = 0
        self.now = 0.0

    def __len__(self):
        return len(self._heap)

    def push(self, time: float, handler: Callable, payload=None) -> Event:
        if time < self.now:
            raise ValueError("cannot schedule an event in the past "
                             "(%.9g < %.9g)" % (time, self.now))
        ev = Event(time, self._seq, handler, payload)
        self._seq += 1
        heapq.heappush(self._heap, ev)
        return ev

    def pop(self) -> Event:
        ev = heapq.heappop(self._heap)
        # the clock never runs backwards
        assert ev.time >= self.now
        self.now = ev.time
        return ev

    def peek_time(self) -> float | None:
        return self._heap[0].time if self._heap else None

    def run(self, until: float | None = None) -> int:
        """Dispatch events in order; stop after `until` if given. Returns count."""
        dispatched = 0
        while self._heap:
            if until is not None and self._heap[0].time > until:
                break
            ev = self.pop()
            ev.handler(ev.time, ev.payload)
            dispatched += 1
        return dispatched
