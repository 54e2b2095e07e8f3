"""Synchronous hop-by-hop simulation of the recovery protocol.

Time advances in ticks. During tick ``k`` every in-flight message makes at
most one forwarding decision, seeing the liveness of tick ``k``. A message
sitting on a node that is down at tick ``k`` is lost. A message reaching the
destination is delivered when it is next processed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

from .escapes import reconstruct_path
from .protocol import DELIVER, SEND, Message, forward, node_states

DELIVERED = "delivered"
DROPPED = "dropped"
LOST = "lost"


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class FailureSchedule:
    """Node outages as half-open tick intervals ``[down_from, up_at)``."""
    events: tuple = ()

    def __post_init__(self):
        evs = tuple(sorted((int(n), int(a), int(b)) for n, a, b in self.events))
        for node, a, b in evs:
            if b <= a:
                raise ScheduleError(f"empty outage interval for node {node}: [{a}, {b})")
        by_start = sorted(evs, key=lambda e: e[1])
        for (n1, a1, b1), (n2, a2, b2) in zip(by_start, by_start[1:]):
            if a2 < b1:
                raise ScheduleError(f"outages of {n1} and {n2} overlap; at most one node may be down")
        object.__setattr__(self, "events", evs)

    def down_at(self, tick: int) -> Optional[int]:
        for node, a, b in self.events:
            if a <= tick < b:
                return node
        return None

    def is_down(self, node: int, tick: int) -> bool:
        return any(n == node and a <= tick < b for n, a, b in self.events)

    @classmethod
    def parse(cls, text: str) -> FailureSchedule:
        events = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ScheduleError(f"line {lineno}: expected 'node down_tick up_tick'")
            events.append(tuple(int(p) for p in parts))
        return cls(tuple(events))


@dataclass(frozen=True)
class Hop:
    tick: int
    src: int
    dst: int
    escape: Optional[tuple]


@dataclass
class Trace:
    msg_id: int
    origin: int
    tick: int
    hops: list = field(default_factory=list)
    outcome: Optional[str] = None
    reason: Optional[str] = None
    realized_cost: float = 0
    end_tick: Optional[int] = None

    @property
    def path(self) -> list:
        return [self.origin] + [h.dst for h in self.hops]


def run(g, t, plan, schedule: FailureSchedule | None, injections, payload: bytes = b"") -> list:
    """Simulate every injection ``(origin, tick)`` to completion; returns traces in injection order."""
    schedule = schedule or FailureSchedule()
    s = t.root
    for node, _, _ in schedule.events:
        if node == s or not 0 <= node < g.n:
            raise ScheduleError(f"cannot schedule failure of node {node}")
    states = node_states(t, plan)
    pending = sorted(((tick, i, origin) for i, (origin, tick) in enumerate(injections)))
    for tick, i, origin in pending:
        if not 0 <= origin < g.n:
            raise ValueError(f"injection {i}: invalid origin {origin}")
        if schedule.is_down(origin, tick):
            raise ValueError(f"injection {i}: origin {origin} is down at tick {tick}")
    traces = [None] * len(pending)
    active = {}  # msg_id -> (node, Message)
    last_inject = pending[-1][0] if pending else 0
    horizon = last_inject + 4 * g.n + 2
    idx = 0
    tick = pending[0][0] if pending else 0
    while (idx < len(pending) or active) and tick <= horizon:
        while idx < len(pending) and pending[idx][0] == tick:
            _, i, origin = pending[idx]
            traces[i] = Trace(i, origin, tick)
            active[i] = (origin, Message(s, payload))
            idx += 1
        down = schedule.down_at(tick)

        def alive(v, _down=down):
            return v != _down

        for i in sorted(active):
            node, msg = active[i]
            tr = traces[i]
            if node == down:
                tr.outcome, tr.reason, tr.end_tick = LOST, "resident-at-failed-node", tick
                del active[i]
                continue
            dec = forward(states[node], msg, alive)
            if dec.action == SEND:
                tr.hops.append(Hop(tick, node, dec.next, dec.message.escape))
                tr.realized_cost += g.edges[g.edge_between(node, dec.next)].cost
                active[i] = (dec.next, dec.message)
            else:
                tr.outcome = DELIVERED if dec.action == DELIVER else DROPPED
                tr.reason = dec.reason
                tr.end_tick = tick
                del active[i]
        tick += 1
        if not active and idx < len(pending):
            tick = max(tick, pending[idx][0])
    for i in list(active):
        tr = traces[i]
        tr.outcome, tr.reason, tr.end_tick = DROPPED, "horizon", tick
    return traces


def trace_log(traces) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["msg_id", "tick", "from", "to", "flag", "p", "q"])
    for tr in traces:
        for h in tr.hops:
            if h.escape is None:
                w.writerow([tr.msg_id, h.tick, h.src, h.dst, 0, "", ""])
            else:
                w.writerow([tr.msg_id, h.tick, h.src, h.dst, 1, h.escape[0], h.escape[1]])
    return buf.getvalue()


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "passed", "detail"])
        for c in self.checks:
            w.writerow([c.name, int(c.passed), c.detail])
        return buf.getvalue()


def expected_route(origin: int, g, t, plan, failed: Optional[int]):
    """Path and cost of a message from ``origin`` while ``failed`` stays down throughout."""
    prefix = [origin]
    v = origin
    while v != t.root and t.parent[v] != failed:
        v = t.parent[v]
        prefix.append(v)
    if v == t.root:
        return prefix, t.dist[origin]
    rest = reconstruct_path(v, plan, t)
    return prefix + rest[1:], t.dist[origin] - t.dist[v] + plan.recovery_cost[v]


def verify(traces, g, t, plan, schedule: FailureSchedule | None) -> Report:
    schedule = schedule or FailureSchedule()
    bound = 4 * g.n
    undelivered, lost, into_down, loops, too_long, cost_bad = [], [], [], [], [], []
    cost_checked = 0
    for tr in traces:
        if tr.outcome == LOST:
            lost.append(tr.msg_id)
        elif tr.outcome != DELIVERED:
            undelivered.append((tr.msg_id, tr.reason))
        for h in tr.hops:
            if schedule.is_down(h.dst, h.tick) or schedule.is_down(h.src, h.tick):
                into_down.append((tr.msg_id, h.tick, h.dst))
        seen = {(tr.origin, None)}
        for h in tr.hops:
            state = (h.dst, h.escape)
            if state in seen:
                loops.append((tr.msg_id, h.tick, state))
                break
            seen.add(state)
        if len(tr.hops) > bound:
            too_long.append(tr.msg_id)
        if tr.outcome != DELIVERED:
            continue
        window = range(tr.tick, tr.end_tick + 1)
        failed = None
        touched = {schedule.down_at(k) for k in window} - {None}
        if len(touched) > 1:
            continue
        if touched:
            failed = touched.pop()
            if not all(schedule.is_down(failed, k) for k in window):
                continue
        path, cost = expected_route(tr.origin, g, t, plan, failed)
        cost_checked += 1
        if tr.path != path or tr.realized_cost != cost:
            cost_bad.append((tr.msg_id, tr.realized_cost, cost))

    def mk(name, bad, extra=""):
        return Check(name, not bad, extra or ("" if not bad else repr(bad[:5])))

    return Report([
        mk("delivery", undelivered),
        Check("residency-loss", True, f"{len(lost)} message(s) lost on a failing node"),
        mk("no-hop-into-failed-node", into_down),
        mk("loop-freedom", loops),
        mk("hop-bound", too_long),
        mk("persistent-failure-cost", cost_bad,
           f"{cost_checked} message(s) checked" if not cost_bad else ""),
    ])
