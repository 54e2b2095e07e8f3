import random

import pytest

from conftest import A, B, S, X, random_graph
from snfr.escapes import solve
from snfr.simnet import (
    DELIVERED,
    LOST,
    FailureSchedule,
    Hop,
    ScheduleError,
    Trace,
    run,
    trace_log,
    verify,
)


def test_g1_persistent_failure(g1):
    t, plan = solve(g1, S)
    sched = FailureSchedule([(X, 0, 100)])
    (tr,) = run(g1, t, plan, sched, [(A, 0)])
    assert tr.outcome == DELIVERED
    assert tr.path == [A, B, S]
    assert tr.realized_cost == 11
    assert verify([tr], g1, t, plan, sched).ok


def test_failure_free_baseline(g1):
    t, plan = solve(g1, S)
    traces = run(g1, t, plan, None, [(v, 0) for v in range(4)])
    assert [tr.realized_cost for tr in traces] == t.dist
    assert all(h.escape is None for tr in traces for h in tr.hops)


GOLDEN_RECOVERY = """\
msg_id,tick,from,to,flag,p,q
0,0,2,3,0,,
0,1,3,1,0,,
0,2,1,0,0,,
"""


def test_recovery_mid_flight(g1):
    # x is down only during tick 0: a detours to b, then b finds x back up
    t, plan = solve(g1, S)
    sched = FailureSchedule([(X, 0, 1)])
    traces = run(g1, t, plan, sched, [(A, 0)])
    assert traces[0].path == [A, B, X, S]
    assert traces[0].realized_cost == 3
    assert traces[0].end_tick == 3
    assert trace_log(traces) == GOLDEN_RECOVERY
    assert verify(traces, g1, t, plan, sched).ok


def test_outage_spanning_two_ticks(g1):
    # b still sees x down at tick 1 and takes its own escape edge
    t, plan = solve(g1, S)
    (tr,) = run(g1, t, plan, FailureSchedule([(X, 0, 2)]), [(A, 0)])
    assert tr.path == [A, B, S] and tr.realized_cost == 11


def test_message_lost_on_failing_node(g1):
    t, plan = solve(g1, S)
    sched = FailureSchedule([(X, 1, 5)])
    (tr,) = run(g1, t, plan, sched, [(A, 0)])
    assert tr.outcome == LOST
    rep = verify([tr], g1, t, plan, sched)
    assert rep.ok
    assert "1 message" in rep["residency-loss"].detail


def test_injection_at_failed_node_rejected(g1):
    t, plan = solve(g1, S)
    with pytest.raises(ValueError):
        run(g1, t, plan, FailureSchedule([(X, 0, 3)]), [(X, 1)])


class TestSchedule:
    def test_overlap_rejected(self):
        with pytest.raises(ScheduleError):
            FailureSchedule([(1, 0, 5), (2, 4, 8)])

    def test_back_to_back_allowed(self):
        s = FailureSchedule([(1, 0, 5), (2, 5, 8)])
        assert s.down_at(4) == 1 and s.down_at(5) == 2 and s.down_at(8) is None

    def test_parse(self):
        s = FailureSchedule.parse("# node down up\n3 0 10\n")
        assert s.events == ((3, 0, 10),)

    def test_destination_cannot_fail(self, g1):
        t, plan = solve(g1, S)
        with pytest.raises(ScheduleError):
            run(g1, t, plan, FailureSchedule([(S, 0, 3)]), [(A, 0)])


class TestVerifyNegativeControls:
    def test_hop_into_failed_node(self, g1):
        t, plan = solve(g1, S)
        sched = FailureSchedule([(X, 0, 100)])
        forged = Trace(0, A, 0, [Hop(0, A, X, None), Hop(1, X, S, None)], DELIVERED,
                       realized_cost=2, end_tick=2)
        rep = verify([forged], g1, t, plan, sched)
        assert not rep["no-hop-into-failed-node"].passed

    def test_loop(self, g1):
        t, plan = solve(g1, S)
        forged = Trace(0, A, 0, [Hop(0, A, B, None), Hop(1, B, A, None), Hop(2, A, B, None),
                                 Hop(3, B, S, None)], DELIVERED, realized_cost=13, end_tick=4)
        rep = verify([forged], g1, t, plan, None)
        assert not rep["loop-freedom"].passed
        assert not rep["persistent-failure-cost"].passed

    def test_undelivered(self, g1):
        t, plan = solve(g1, S)
        forged = Trace(0, A, 0, [], "dropped", "ttl", end_tick=0)
        assert not verify([forged], g1, t, plan, None)["delivery"].passed


def test_deterministic_logs():
    g = random_graph(60, 6, 11)
    t, plan = solve(g, g.dest)
    failed = next(v for v in range(g.n) if v != g.dest and t.children[v])
    sched = FailureSchedule([(failed, 3, 40)])
    rng = random.Random(5)
    inj = [(v, rng.randrange(10)) for v in range(g.n) if v != failed]
    logs = {trace_log(run(g, t, plan, sched, inj)) for _ in range(3)}
    assert len(logs) == 1


@pytest.mark.parametrize("seed", range(10))
def test_randomized_persistent_failures(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(20, 80), rng.uniform(3, 8), seed)
    t, plan = solve(g, g.dest)
    for failed in range(g.n):
        if failed == g.dest or t.parent[failed] is None:
            continue
        sched = FailureSchedule([(failed, 0, 10 * g.n)])
        inj = [(v, rng.randrange(5)) for v in range(g.n) if v != failed]
        traces = run(g, t, plan, sched, inj)
        rep = verify(traces, g, t, plan, sched)
        assert rep.ok, rep.to_csv()
        assert all(tr.outcome == DELIVERED for tr in traces)
