import pytest

from telesim.sim import EventScheduler


def test_events_fire_in_time_then_insertion_order():
    sched = EventScheduler()
    log = []
    sched.at(2.0, lambda t: log.append(("b", t)))
    sched.at(1.0, lambda t: log.append(("a", t)))
    sched.at(1.0, lambda t: log.append(("c", t)))
    sched.run_until(5.0)
    assert log == [("a", 1.0), ("c", 1.0), ("b", 2.0)]
    assert sched.now == 5.0


def test_periodic_ticks_do_not_drift():
    sched = EventScheduler()
    times = []
    task = sched.every(0.1, times.append, start=0.0)
    sched.run_until(1.0)
    task.cancel()
    assert times == [i * 0.1 for i in range(11)]


def test_run_until_excludes_later_events():
    sched = EventScheduler()
    log = []
    sched.at(3.0, lambda t: log.append(t))
    sched.run_until(2.9)
    assert log == []
    sched.run_until(3.0)
    assert log == [3.0]


def test_cancel_pending_event():
    sched = EventScheduler()
    log = []
    ev = sched.at(1.0, lambda t: log.append(t))
    ev.cancel()
    sched.run_until(2.0)
    assert log == []


def test_cannot_schedule_in_the_past():
    sched = EventScheduler()
    sched.run_until(5.0)
    with pytest.raises(ValueError):
        sched.at(1.0, lambda t: None)


def test_handlers_can_schedule_more_events():
    sched = EventScheduler()
    log = []

    def chain(t):
        log.append(t)
        if t < 0.5:
            sched.at(t + 0.1, chain)

    sched.at(0.0, chain)
    sched.run_until(10.0)
    assert len(log) == 6
