import threading
import time

import pytest

from telesim.core import Envelope
from telesim.netlink import (
    EnvelopeServer,
    LinkConfig,
    LossyLink,
    ROBOT_TO_OPERATOR,
    WireError,
    connect,
    decode_envelope,
    encode_envelope,
)
from telesim.sim import EventScheduler


def env(seq, topic="/odom", payload=None):
    return Envelope(topic=topic, seq=seq, stamp=1.25, payload=payload or {"x": 0.5}, source="robot")


def test_encode_decode_roundtrip():
    e = env(7, payload={"pose": {"x": 1.0, "y": 2.0, "theta": 0.1}})
    line = encode_envelope(e)
    assert line.endswith(b"\n")
    back = decode_envelope(line, source="robot")
    assert back.topic == e.topic
    assert back.seq == e.seq
    assert back.stamp == e.stamp
    assert back.payload == e.payload


def test_decode_rejects_garbage():
    with pytest.raises(WireError):
        decode_envelope(b"{not json}")
    with pytest.raises(WireError):
        decode_envelope(b'{"topic": "/odom"}')


def collect_with_event(n, out):
    done = threading.Event()

    def cb(e):
        out.append(e)
        if len(out) >= n:
            done.set()

    return cb, done


def test_tcp_stream_preserves_order_and_content():
    received = []
    cb, done = collect_with_event(50, received)
    server = EnvelopeServer("127.0.0.1", 0, on_connection=lambda conn: cb)
    try:
        client = connect("127.0.0.1", server.port, on_envelope=lambda e: None)
        for i in range(50):
            client.send(env(i, payload={"i": i}))
        assert done.wait(15.0)
        assert [e.seq for e in received] == list(range(50))
        assert received[10].payload == {"i": 10}
        client.close()
    finally:
        server.close()


def test_fault_injector_wraps_tcp_stream():
    # The same LossyLink drives a real socket: deliver callback writes to the
    # connection instead of an in-process bus.
    received = []
    cb, done = collect_with_event(1, received)
    server = EnvelopeServer("127.0.0.1", 0, on_connection=lambda conn: cb)
    try:
        client = connect("127.0.0.1", server.port, on_envelope=lambda e: None)
        sched = EventScheduler()
        link = LossyLink(
            LinkConfig(base_latency=0.0, jitter_std=0.0, outages=((1.0, 2.0),)),
            sched,
            deliver={ROBOT_TO_OPERATOR: client.send},
        )
        link.send(ROBOT_TO_OPERATOR, env(0))
        sched.run_until(0.5)
        sched.at(1.5, lambda t: link.send(ROBOT_TO_OPERATOR, env(1)))  # in outage: dropped
        sched.run_until(3.0)
        assert done.wait(15.0)
        time.sleep(0.1)
        assert [e.seq for e in received] == [0]
        assert link.stats.dropped[ROBOT_TO_OPERATOR] == 1
        client.close()
    finally:
        server.close()
