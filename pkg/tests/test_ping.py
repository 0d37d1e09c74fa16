import pytest
from hypothesis import given, strategies as st

from telesim.core import Envelope
from telesim.netlink import (
    CODE_OK,
    CODE_TIMEOUT,
    Connectivity,
    LinkConfig,
    LossyLink,
    OPERATOR_TO_ROBOT,
    PingMonitor,
    ROBOT_TO_OPERATOR,
    classify_connectivity,
)
from telesim.sim import EventScheduler


def test_all_ok_stays_good():
    assert classify_connectivity([0] * 10) is Connectivity.GOOD


def test_bad_at_fifth_record():
    codes = [0, 0, 1, 1, 1]
    assert classify_connectivity(codes[:4]) is Connectivity.GOOD
    assert classify_connectivity(codes) is Connectivity.BAD


def test_alternating_never_flips():
    codes = [1, 1, 0, 1, 1, 0, 1, 1, 0]
    assert classify_connectivity(codes) is Connectivity.GOOD


def test_k_one_flips_on_any_failure():
    assert classify_connectivity([0, 1], k=1) is Connectivity.BAD
    assert classify_connectivity([0, 1, 0], k=1) is Connectivity.GOOD


@given(st.lists(st.integers(min_value=0, max_value=1), max_size=60), st.integers(min_value=1, max_value=5))
def test_classifier_matches_run_counting_reference(codes, k):
    # Independent reference: scan all suffix runs directly.
    status = Connectivity.GOOD
    for i in range(len(codes)):
        if i + 1 >= k and len(set(codes[i + 1 - k : i + 1])) == 1:
            status = Connectivity.BAD if codes[i] == 1 else Connectivity.GOOD
    assert classify_connectivity(codes, k) is status


class PingHarness:
    """Robot-side monitor wired through a LossyLink to an echoing operator."""

    def __init__(self, cfg: LinkConfig, k=3, interval=0.1, timeout=0.08):
        self.sched = EventScheduler()
        self.status_log = []
        self.link = LossyLink(
            cfg,
            self.sched,
            deliver={
                ROBOT_TO_OPERATOR: self._operator_receives,
                OPERATOR_TO_ROBOT: self._robot_receives,
            },
        )
        self.monitor = PingMonitor(
            self.sched,
            send_ping=self._send_ping,
            k=k,
            interval=interval,
            timeout=timeout,
            on_status_change=lambda s: self.status_log.append((s.last_change, s.status)),
        )

    def _send_ping(self, seq):
        env = Envelope(topic="/ping", seq=seq, stamp=self.sched.now, payload={"seq": seq}, source="robot")
        self.link.send(ROBOT_TO_OPERATOR, env)

    def _operator_receives(self, env):
        pong = Envelope(
            topic="/pong",
            seq=env.seq,
            stamp=self.sched.now,
            payload={"seq": env.payload["seq"], "code": 0},
            source="operator",
        )
        self.link.send(OPERATOR_TO_ROBOT, pong)

    def _robot_receives(self, env):
        self.monitor.on_pong(env.payload["seq"])

    def run(self, duration):
        self.monitor.start()
        self.sched.run_until(duration)


def test_healthy_link_all_codes_zero():
    h = PingHarness(LinkConfig(base_latency=0.02, jitter_std=0.0))
    h.run(3.0)
    assert len(h.monitor.history) >= 25
    assert all(rec.code == CODE_OK for rec in h.monitor.history)
    assert h.monitor.status.status is Connectivity.GOOD
    assert h.status_log == []


def test_outage_gives_consecutive_timeouts_and_flips():
    h = PingHarness(LinkConfig(base_latency=0.02, jitter_std=0.0, outages=((5.0, 12.0),)))
    h.run(6.0)
    codes = [rec.code for rec in h.monitor.history]
    # At least three consecutive timeouts appear once the outage starts.
    assert "111" in "".join(map(str, codes))
    assert h.monitor.status.status is Connectivity.BAD
    # Flip happens within K*interval + timeout of the outage start.
    assert len(h.status_log) == 1
    t_flip, status = h.status_log[0]
    assert status is Connectivity.BAD
    assert 5.0 < t_flip <= 5.0 + 3 * 0.1 + 0.08 + 1e-9


def test_recovery_flips_back_within_bound():
    h = PingHarness(LinkConfig(base_latency=0.02, jitter_std=0.0, outages=((5.0, 12.0),)))
    h.run(20.0)
    assert [s for _, s in h.status_log] == [Connectivity.BAD, Connectivity.GOOD]
    t_good = h.status_log[1][0]
    assert 12.0 < t_good <= 12.0 + 3 * 0.1 + 0.02 + 0.08 + 1e-9


def test_slow_link_times_out_despite_delivery():
    h = PingHarness(LinkConfig(base_latency=0.09, jitter_std=0.0))
    h.run(2.0)
    assert all(rec.code == CODE_TIMEOUT for rec in h.monitor.history)
    assert h.monitor.status.status is Connectivity.BAD


def test_timeout_must_be_less_than_interval():
    sched = EventScheduler()
    with pytest.raises(ValueError):
        PingMonitor(sched, send_ping=lambda s: None, timeout=0.2, interval=0.1)
