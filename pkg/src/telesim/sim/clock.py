"""Deterministic discrete-event scheduler on a virtual clock.

Headless runs pop events as fast as possible; interactive mode paces the
same queue against the wall clock. Same-time events fire in scheduling
order, so a run is fully determined by the schedule itself.
"""

from __future__ import annotations

import heapq
from typing import Callable

Handler = Callable[[float], None]


class ScheduledEvent:
    __slots__ = ("time", "seq", "handler", "cancelled")

    def __init__(self, time: float, seq: int, handler: Handler):
        self.time = time
        self.seq = seq
        self.handler = handler
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True

    def __lt__(self, other: "ScheduledEvent") -> bool:
        return (self.time, self.seq) < (other.time, other.seq)


class EventScheduler:
    def __init__(self, start: float = 0.0):
        self._now = start
        self._heap: list[ScheduledEvent] = []
        self._seq = 0

    @property
    def now(self) -> float:
        return self._now

    def at(self, time: float, handler: Handler) -> ScheduledEvent:
        if time < self._now:
            raise ValueError(f"cannot schedule at {time} before now={self._now}")
        ev = ScheduledEvent(time, self._seq, handler)
        self._seq += 1
        heapq.heappush(self._heap, ev)
        return ev

    def every(self, period: float, handler: Handler, start: float | None = None) -> "PeriodicTask":
        """Run handler at start, start + period, ... Tick times are computed
        from the tick index, not accumulated, so they do not drift."""
        return PeriodicTask(self, period, handler, self._now if start is None else start)

    def peek_time(self) -> float | None:
        while self._heap and self._heap[0].cancelled:
            heapq.heappop(self._heap)
        return self._heap[0].time if self._heap else None

    def step(self) -> bool:
        """Run the next event; returns False when the queue is empty."""
        while self._heap:
            ev = heapq.heappop(self._heap)
            if ev.cancelled:
                continue
            self._now = ev.time
            ev.handler(ev.time)
            return True
        return False

    def run_until(self, t_end: float) -> None:
        while True:
            t = self.peek_time()
            if t is None or t > t_end:
                break
            self.step()
        self._now = max(self._now, t_end)


class PeriodicTask:
    def __init__(self, sched: EventScheduler, period: float, handler: Handler, start: float):
        if period <= 0:
            raise ValueError(f"period must be > 0, got {period}")
        self._sched = sched
        self._period = period
        self._handler = handler
        self._start = start
        self._tick = 0
        self._active = True
        self._pending = sched.at(start, self._fire)

    def _fire(self, now: float) -> None:
        if not self._active:
            return
        self._tick += 1
        self._pending = self._sched.at(self._start + self._tick * self._period, self._fire)
        self._handler(now)

    def cancel(self) -> None:
        self._active = False
        self._pending.cancel()
