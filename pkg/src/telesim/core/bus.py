"""In-process topic bus with a closed topic registry.

Publishing fans out synchronously to every subscriber registered at publish
time, in subscribe order, so delivery order equals publish order per topic.
A lock serializes publishers from different threads.
"""

from __future__ import annotations

import threading
from typing import Any, Callable, Iterable

from .messages import TOPICS, Envelope

Callback = Callable[[Envelope], None]


class UnknownTopicError(KeyError):
    """Topic is not in the registry; catches wiring typos at startup."""


class Subscription:
    def __init__(self, bus: "TopicBus", topic: str, callback: Callback):
        self.bus = bus
        self.topic = topic
        self.callback = callback
        self.active = True

    def cancel(self) -> None:
        self.bus.unsubscribe(self)


class TopicBus:
    def __init__(self, topics: Iterable[str] = TOPICS):
        self._topics = frozenset(topics)
        self._subs: dict[str, list[Subscription]] = {t: [] for t in self._topics}
        self._seq: dict[tuple[str, str], int] = {}
        self._lock = threading.Lock()

    def _check_topic(self, topic: str) -> None:
        if topic not in self._topics:
            raise UnknownTopicError(f"unknown topic {topic!r}; registered: {sorted(self._topics)}")

    def subscribe(self, topic: str, callback: Callback) -> Subscription:
        self._check_topic(topic)
        sub = Subscription(self, topic, callback)
        with self._lock:
            self._subs[topic].append(sub)
        return sub

    def unsubscribe(self, sub: Subscription) -> None:
        with self._lock:
            sub.active = False
            try:
                self._subs[sub.topic].remove(sub)
            except ValueError:
                pass

    def publish(self, topic: str, payload: Any, stamp: float, source: str = "") -> Envelope:
        """Wrap a payload in an Envelope with the next per-(source, topic) seq
        and deliver it to current subscribers."""
        self._check_topic(topic)
        with self._lock:
            key = (source, topic)
            seq = self._seq.get(key, -1) + 1
            self._seq[key] = seq
            env = Envelope(topic=topic, seq=seq, stamp=stamp, payload=payload, source=source)
            targets = list(self._subs[topic])
        for sub in targets:
            if sub.active:
                sub.callback(env)
        return env

    def deliver(self, env: Envelope) -> None:
        """Inject an already-stamped envelope (e.g. one that crossed the link)
        without assigning a new seq."""
        self._check_topic(env.topic)
        with self._lock:
            targets = list(self._subs[env.topic])
        for sub in targets:
            if sub.active:
                sub.callback(env)
