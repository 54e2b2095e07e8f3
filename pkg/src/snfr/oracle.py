"""Brute-force baselines for cross-checking the escape-edge algorithm.

Nothing here reuses the classification or shortest-path code of
:mod:`snfr.escapes`, so agreement between the two is meaningful.
"""

from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass, field
from statistics import fmean

from .escapes import SOURCE, RecoveryEdge, RecoveryGraph
from .graph import ShortestPathTree, WeightedGraph


class UnreachableChildError(ValueError):
    pass


def dijkstra(g: WeightedGraph, source: int, removed: int | None = None):
    """Textbook Dijkstra on ``g`` with node ``removed`` (and its edges) deleted.

    Returns ``(dist, pred)`` dicts over reachable nodes.
    """
    dist = {source: 0}
    pred = {source: None}
    pq = [(0, source)]
    settled = set()
    while pq:
        d, u = heapq.heappop(pq)
        if u in settled:
            continue
        settled.add(u)
        for v, eid in g.adj[u]:
            if v == removed:
                continue
            nd = d + g.edges[eid].cost
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(pq, (nd, v))
    return dist, pred


@dataclass
class OptimalRecovery:
    """``cost[x][child]`` is the shortest child-to-root distance with ``x`` deleted."""
    root: int
    cost: dict
    paths: dict = field(default_factory=dict)

    def pairs(self):
        for x in sorted(self.cost):
            for c in sorted(self.cost[x]):
                yield x, c, self.cost[x][c]


def optimal_recovery(g: WeightedGraph, t: ShortestPathTree,
                     with_paths: bool = False) -> OptimalRecovery:
    s = t.root
    out = OptimalRecovery(s, {})
    for x in range(g.n):
        if x == s:
            continue
        kids = t.children[x]
        out.cost[x] = {}
        if not kids:
            continue
        dist, pred = dijkstra(g, s, removed=x)
        for c in kids:
            if c not in dist:
                raise UnreachableChildError(f"child {c} cannot reach {s} when {x} fails")
            out.cost[x][c] = dist[c]
            if with_paths:
                path = [c]
                while path[-1] != s:
                    path.append(pred[path[-1]])
                out.paths.setdefault(x, {})[c] = path
    return out


def _owner(t: ShortestPathTree, x: int, u: int):
    """Child of ``x`` whose subtree holds ``u``; None when ``u`` is ``x`` or outside."""
    if u == x:
        return None
    for c in t.children[x]:
        if t.disc[c] <= t.disc[u] <= t.fin[c]:
            return c
    return None


def naive_recovery_graph(g: WeightedGraph, t: ShortestPathTree, x: int) -> RecoveryGraph:
    """Recovery graph of ``x`` by classifying every non-tree edge directly."""
    if x == t.root:
        raise ValueError("the destination has no recovery graph")
    tree = set(eid for eid in t.parent_edge if eid is not None)
    dist = t.dist
    green = {}
    blue = {}
    for eid, (p, q, cost) in enumerate(g.edges):
        if eid in tree or p == x or q == x:
            continue
        op, oq = _owner(t, x, p), _owner(t, x, q)
        inside_p = op is not None
        inside_q = oq is not None
        if inside_p and inside_q:
            if op == oq:
                continue  # red
            w = (dist[p] - dist[op]) + cost + (dist[q] - dist[oq])
            key = (min(op, oq), max(op, oq))
            if key not in blue or (w, eid) < blue[key]:
                blue[key] = (w, eid)
        elif inside_p or inside_q:
            inner, outer, child = (p, q, op) if inside_p else (q, p, oq)
            # outer must lie outside x's subtree entirely
            if t.disc[x] <= t.disc[outer] <= t.fin[x]:
                continue
            w = (dist[inner] - dist[child]) + cost + dist[outer]
            if child not in green or (w, eid) < green[child]:
                green[child] = (w, eid)
    edges = [RecoveryEdge(SOURCE, c, w, eid) for c, (w, eid) in green.items()]
    edges += [RecoveryEdge(a, b, w, eid) for (a, b), (w, eid) in blue.items()]
    edges.sort()
    return RecoveryGraph(x, tuple(t.children[x]), edges)


def recovery_graph_distances(rg: RecoveryGraph) -> dict:
    """Shortest distance from the virtual source to every reachable child."""
    adj = {}
    for e in rg.edges:
        adj.setdefault(e.a, []).append((e.b, e.weight))
        adj.setdefault(e.b, []).append((e.a, e.weight))
    dist = {SOURCE: 0}
    pq = [(0, SOURCE)]
    settled = set()
    while pq:
        d, u = heapq.heappop(pq)
        if u in settled:
            continue
        settled.add(u)
        for v, w in adj.get(u, ()):
            if v not in dist or d + w < dist[v]:
                dist[v] = d + w
                heapq.heappush(pq, (d + w, v))
    del dist[SOURCE]
    return dist


@dataclass
class StretchReport:
    rows: list  # (x, child, opt_cost, alg_cost, ratio)

    @property
    def ratios(self):
        return [r[4] for r in self.rows]

    @property
    def mean(self) -> float:
        return fmean(self.ratios) if self.rows else 1.0

    @property
    def max(self) -> float:
        return max(self.ratios, default=1.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "child", "opt_cost", "alg_cost", "stretch"])
        for x, c, opt, alg, ratio in self.rows:
            w.writerow([x, c, opt, alg, repr(ratio)])
        return buf.getvalue()


def stretch(plan, opt: OptimalRecovery) -> StretchReport:
    """Ratio of recovery cost to optimal cost for every (failed node, child) pair.

    Pairs with a zero optimal cost count as ratio 1.0 when both are zero.
    """
    rows = []
    for x, c, opt_cost in opt.pairs():
        alg = plan.recovery_cost[c]
        if alg is None:
            raise ValueError(f"no recovery cost for child {c} of {x}")
        if opt_cost == 0:
            ratio = 1.0 if alg == 0 else float("inf")
        else:
            ratio = alg / opt_cost
        rows.append((x, c, opt_cost, alg, ratio))
    return StretchReport(rows)


def read_oracle_csv(text: str) -> OptimalRecovery:
    rows = list(csv.DictReader(io.StringIO(text)))
    cost = {}
    for row in rows:
        val = float(row["opt_cost"])
        cost.setdefault(int(row["x"]), {})[int(row["child"])] = int(val) if val.is_integer() else val
    return OptimalRecovery(-1, cost)


def write_oracle_csv(opt: OptimalRecovery) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "child", "opt_cost", "alg_cost", "stretch"])
    for x, c, cost in opt.pairs():
        w.writerow([x, c, cost, "", ""])
    return buf.getvalue()
