"""Ping/pong connectivity probing with debounced status classification.

The robot sends a ping every interval; the far side echoes the sequence
number back. A pong must arrive strictly before its timeout to record
code 0, anything else records code 1 at the deadline. Status flips only
after K consecutive identical outcomes, which keeps isolated losses on a
healthy link from flapping the mode state machine (K=1 restores the
switch-on-any-failure behavior).
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from ..sim.clock import EventScheduler

PING_INTERVAL = 0.1
PING_TIMEOUT = 0.08
DEBOUNCE_K = 3

CODE_OK = 0
CODE_TIMEOUT = 1


class Connectivity(enum.Enum):
    GOOD = "good"
    BAD = "bad"


@dataclass(frozen=True)
class PingRecord:
    seq: int
    sent_at: float
    code: int

    def __post_init__(self) -> None:
        if self.code not in (CODE_OK, CODE_TIMEOUT):
            raise ValueError(f"ping code must be 0 or 1, got {self.code}")


@dataclass(frozen=True)
class ConnectivityStatus:
    status: Connectivity
    last_change: float

    @property
    def good(self) -> bool:
        return self.status is Connectivity.GOOD


def classify_connectivity(codes: Iterable[int], k: int = DEBOUNCE_K) -> Connectivity:
    """Status after a code history, starting from GOOD: a run of k identical
    codes commits to that side."""
    if k < 1:
        raise ValueError(f"debounce k must be >= 1, got {k}")
    status = Connectivity.GOOD
    run_code = None
    run_len = 0
    for code in codes:
        if code == run_code:
            run_len += 1
        else:
            run_code = code
            run_len = 1
        if run_len >= k:
            status = Connectivity.BAD if code == CODE_TIMEOUT else Connectivity.GOOD
    return status


class PingMonitor:
    """Robot-side prober: emits pings, matches pongs, tracks the status."""

    def __init__(
        self,
        sched: EventScheduler,
        send_ping: Callable[[int], None],
        k: int = DEBOUNCE_K,
        interval: float = PING_INTERVAL,
        timeout: float = PING_TIMEOUT,
        on_status_change: Callable[[ConnectivityStatus], None] | None = None,
        history_len: int = 256,
    ):
        if timeout >= interval:
            raise ValueError(f"timeout {timeout} must be < interval {interval} (one ping in flight)")
        self.sched = sched
        self.send_ping = send_ping
        self.k = k
        self.interval = interval
        self.timeout = timeout
        self.on_status_change = on_status_change
        self.history: deque[PingRecord] = deque(maxlen=history_len)
        self.status = ConnectivityStatus(Connectivity.GOOD, sched.now)
        self._seq = -1
        self._pending: dict[int, float] = {}  # seq -> sent_at
        self._timeout_events: dict[int, object] = {}
        self._run_code: int | None = None
        self._run_len = 0
        self._task = None

    def start(self) -> None:
        self._task = self.sched.every(self.interval, self._send_next)

    def stop(self) -> None:
        if self._task is not None:
            self._task.cancel()

    def _send_next(self, now: float) -> None:
        self._seq += 1
        seq = self._seq
        self._pending[seq] = now
        self._timeout_events[seq] = self.sched.at(now + self.timeout, lambda t, s=seq: self._on_timeout(s, t))
        self.send_ping(seq)

    def on_pong(self, seq: int) -> None:
        sent_at = self._pending.pop(seq, None)
        if sent_at is None:
            return  # late or duplicate pong: its timeout already recorded
        ev = self._timeout_events.pop(seq, None)
        if ev is not None:
            ev.cancel()
        self._record(PingRecord(seq=seq, sent_at=sent_at, code=CODE_OK), self.sched.now)

    def _on_timeout(self, seq: int, now: float) -> None:
        sent_at = self._pending.pop(seq, None)
        if sent_at is None:
            return
        self._timeout_events.pop(seq, None)
        self._record(PingRecord(seq=seq, sent_at=sent_at, code=CODE_TIMEOUT), now)

    def _record(self, rec: PingRecord, now: float) -> None:
        self.history.append(rec)
        if rec.code == self._run_code:
            self._run_len += 1
        else:
            self._run_code = rec.code
            self._run_len = 1
        if self._run_len >= self.k:
            new = Connectivity.BAD if rec.code == CODE_TIMEOUT else Connectivity.GOOD
            if new is not self.status.status:
                self.status = ConnectivityStatus(new, now)
                if self.on_status_change is not None:
                    self.on_status_change(self.status)
