"""Single-node-failure recovery: escape edges for every node of a shortest-path tree.

For a failed node ``x`` with children ``x_1..x_k`` the surviving subtrees are
contracted into a small recovery graph: one vertex per child plus a virtual
source standing for the part of the tree that still reaches the destination.
Green edges leave a child's subtree for the outside of ``x``'s subtree; blue
edges join the subtrees of two siblings. A single Dijkstra run on that graph
yields every child's escape edge.

Green candidates travel up the tree in meldable heaps keyed by
``dist[p] + cost(p, q) + dist[q]``, which does not depend on the node that
currently carries the candidate, so heaps are melded without re-keying.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field

from .graph import ShortestPathTree, WeightedGraph, bucket_by_nca, build_spt
from .heap import PairingHeap

SOURCE = -1
"""Endpoint id of the virtual source vertex in a recovery graph."""


class NotBiconnectedError(ValueError):
    def __init__(self, failed: int, stranded):
        super().__init__(
            f"graph is not biconnected: failure of node {failed} strands children {sorted(stranded)}")
        self.failed = failed
        self.stranded = sorted(stranded)


@dataclass(frozen=True, order=True)
class RecoveryEdge:
    """Edge of a recovery graph. ``a < b``; ``a == SOURCE`` marks a green edge."""
    a: int
    b: int
    weight: float
    origin: int


@dataclass
class RecoveryGraph:
    failed: int
    children: tuple
    edges: list

    def edge_map(self) -> dict:
        return {(e.a, e.b): e for e in self.edges}


@dataclass
class EscapePlan:
    """Per-node escape edges for one destination.

    ``escape[v]`` is ``(p, q)`` with ``p`` inside ``v``'s subtree; it is None
    for the root and for the root's children (failure of the destination
    itself is not recoverable).
    """
    root: int
    escape: list
    escape_edge: list
    recovery_cost: list
    next_sibling: list
    stats: dict = field(default_factory=dict)
    recovery_graphs: dict = field(default_factory=dict, repr=False)

    def to_text(self) -> str:
        lines = [f"# escape plan for destination {self.root}"]
        for v, esc in enumerate(self.escape):
            if v == self.root:
                continue
            if esc is None:
                lines.append(f"{v} - - -")
            else:
                lines.append(f"{v} {esc[0]} {esc[1]} {_fmt(self.recovery_cost[v])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, g: WeightedGraph, t: ShortestPathTree) -> EscapePlan:
        """Parse :meth:`to_text` output; sibling links are rebuilt from ``t``."""
        if isinstance(text, (bytes, bytearray)):
            text = text.decode("utf-8")
        n = g.n
        plan = cls(t.root, [None] * n, [None] * n, [None] * n, [None] * n)
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 4 fields")
            v = int(parts[0])
            if parts[1] == "-":
                continue
            p, q = int(parts[1]), int(parts[2])
            eid = g.edge_between(p, q)
            if eid is None:
                raise ValueError(f"line {lineno}: ({p}, {q}) is not an edge")
            cost = float(parts[3])
            plan.escape[v] = (p, q)
            plan.escape_edge[v] = eid
            plan.recovery_cost[v] = int(cost) if cost.is_integer() else cost
            x = t.parent[v]
            if t.in_subtree(q, x):
                w = q
                while t.depth[w] > t.depth[v]:
                    w = t.parent[w]
                plan.next_sibling[v] = w
        return plan


def _fmt(c) -> str:
    if isinstance(c, float) and c.is_integer():
        return str(int(c))
    return str(c)


def build_recovery_graph(x: int, child_heaps, bucket, g: WeightedGraph,
                         t: ShortestPathTree, stats: dict | None = None) -> RecoveryGraph:
    """Assemble the recovery graph for the failure of ``x``.

    ``child_heaps[i]`` carries the green candidates of ``t.children[x][i]``;
    invalid minima are popped for good. ``bucket`` holds the non-tree edges
    whose nearest common ancestor is ``x``.
    """
    children = t.children[x]
    disc, fin, dist = t.disc, t.fin, t.dist
    lo, hi = disc[x], fin[x]
    edges = []
    deleted = 0
    for child, heap in zip(children, child_heaps):
        while heap:
            (priority, eid, _), far = heap.find_min()
            if lo <= disc[far] <= hi:
                heap.delete_min()
                deleted += 1
                continue
            edges.append(RecoveryEdge(SOURCE, child, priority - dist[child], eid))
            break

    child_disc = [disc[c] for c in children]
    best = {}
    for eid in bucket:
        p, q, cost = g.edges[eid]
        if p == x or q == x:
            continue
        cp = children[bisect.bisect_right(child_disc, disc[p]) - 1]
        cq = children[bisect.bisect_right(child_disc, disc[q]) - 1]
        if cp == cq:
            continue
        w = (dist[p] - dist[cp]) + cost + (dist[q] - dist[cq])
        key = (cp, cq) if cp < cq else (cq, cp)
        cur = best.get(key)
        if cur is None or (w, eid) < cur:
            best[key] = (w, eid)
    for (a, b), (w, eid) in best.items():
        edges.append(RecoveryEdge(a, b, w, eid))
    edges.sort()
    if stats is not None:
        stats["deleted"] = stats.get("deleted", 0) + deleted
        stats["blue"] = stats.get("blue", 0) + len(best)
    return RecoveryGraph(x, tuple(children), edges)


def solve_recovery_graph(rg: RecoveryGraph):
    """Dijkstra from the virtual source.

    Returns ``(dist, parent, origin)`` dicts keyed by child id; unreachable
    children are absent.
    """
    adj = {c: [] for c in rg.children}
    adj[SOURCE] = []
    for e in rg.edges:
        adj[e.a].append((e.b, e.weight, e.origin))
        adj[e.b].append((e.a, e.weight, e.origin))
    dist = {SOURCE: 0}
    parent = {}
    origin = {}
    done = set()
    pq = [(0, SOURCE)]
    while pq:
        d, u = heapq.heappop(pq)
        if u in done:
            continue
        done.add(u)
        for v, w, eid in adj[u]:
            if v in done:
                continue
            nd = d + w
            cur = dist.get(v, math.inf)
            if nd < cur or (nd == cur and (u, eid) < (parent[v], origin[v])):
                dist[v] = nd
                parent[v] = u
                origin[v] = eid
                heapq.heappush(pq, (nd, v))
    del dist[SOURCE]
    return dist, parent, origin


def compute_escapes(g: WeightedGraph, t: ShortestPathTree, buckets=None,
                    keep_graphs: bool = False) -> EscapePlan:
    """Escape edge and recovery cost of every node for the failure of its parent.

    Runs in O(m log n). Raises :class:`NotBiconnectedError` when some child
    cannot reach the destination after its parent fails.
    """
    if buckets is None:
        buckets = bucket_by_nca(g, t)
    n = g.n
    root = t.root
    plan = EscapePlan(root, [None] * n, [None] * n, [None] * n, [None] * n)
    stats = {"inserted": 0, "deleted": 0, "blue": 0}
    heaps = [None] * n
    parent_edge, dist, children = t.parent_edge, t.dist, t.children

    for x in reversed(t.preorder):
        kids = children[x]
        if kids and x != root:
            rg = build_recovery_graph(x, [heaps[c] for c in kids], buckets[x], g, t, stats)
            rdist, rparent, rorigin = solve_recovery_graph(rg)
            if len(rdist) != len(kids):
                raise NotBiconnectedError(x, set(kids) - set(rdist))
            for c in kids:
                eid = rorigin[c]
                p, q, _ = g.edges[eid]
                if not t.in_subtree(p, c):
                    p, q = q, p
                plan.escape[c] = (p, q)
                plan.escape_edge[c] = eid
                plan.recovery_cost[c] = rdist[c]
                if rparent[c] != SOURCE:
                    plan.next_sibling[c] = rparent[c]
            if keep_graphs:
                plan.recovery_graphs[x] = rg

        heap = PairingHeap()
        for c in kids:
            heap.meld(heaps[c])
            heaps[c] = None
        if x != root:
            for q, eid in g.adj[x]:
                if eid == parent_edge[x] or eid == parent_edge[q]:
                    continue
                heap.insert((dist[x] + g.edges[eid].cost + dist[q], eid, x), q)
                stats["inserted"] += 1
        heaps[x] = heap

    plan.stats = stats
    return plan


def solve(g: WeightedGraph, s: int | None = None, keep_graphs: bool = False):
    """Convenience pipeline: tree, buckets and escape plan for destination ``s``."""
    if s is None:
        s = g.dest
    t = build_spt(g, s)
    plan = compute_escapes(g, t, bucket_by_nca(g, t), keep_graphs=keep_graphs)
    return t, plan


def reconstruct_path(v: int, plan: EscapePlan, t: ShortestPathTree) -> list[int]:
    """Expand ``v``'s escape edge into the full recovery walk to the root."""
    if v == t.root:
        raise ValueError("the destination has no recovery path")
    if plan.escape[v] is None:
        raise ValueError(f"no escape edge recorded for node {v}")
    x = t.parent[v]
    path = [v]
    r = v
    for _ in range(len(t.children[x])):
        p, q = plan.escape[r]
        path.extend(t.path_down(r, p)[1:])
        path.append(q)
        if not t.in_subtree(q, x):
            path.extend(t.path_to_root(q)[1:])
            return path
        nxt = plan.next_sibling[r]
        w = q
        while w != nxt:
            w = t.parent[w]
            path.append(w)
        r = nxt
    raise ValueError(f"escape chain from node {v} does not leave the subtree of {x}")


def path_cost(g: WeightedGraph, path) -> float:
    total = 0
    for a, b in zip(path, path[1:]):
        eid = g.edge_between(a, b)
        if eid is None:
            raise ValueError(f"({a}, {b}) is not an edge")
        total += g.edges[eid].cost
    return total


def all_destinations(g: WeightedGraph):
    """Yield ``(s, tree, plan)`` for every destination, one at a time."""
    for s in range(g.n):
        yield (s, *solve(g, s))
