"""Weighted graphs, shortest-path trees, and nearest-common-ancestor buckets."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import NamedTuple


class GraphError(ValueError):
    """Invalid graph structure (self-loop, duplicate edge, bad cost...)."""


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DisconnectedGraphError(GraphError):
    pass


class Edge(NamedTuple):
    u: int
    v: int
    cost: float

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


class WeightedGraph:
    """Undirected simple graph on nodes ``0..n-1``.

    ``dest`` is the destination recorded in the graph file header; it has no
    bearing on the graph itself and only serves as the default destination.
    """

    def __init__(self, n: int, edges, dest: int = 0):
        if n < 1:
            raise GraphError("node count must be positive")
        if not 0 <= dest < n:
            raise GraphError(f"destination {dest} out of range")
        self.n = n
        self.dest = dest
        self.edges: list[Edge] = []
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        seen = set()
        for u, v, cost in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has endpoint out of range")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (cost >= 0) or math.isinf(cost):
                raise GraphError(f"edge ({u}, {v}) has invalid cost {cost!r}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            eid = len(self.edges)
            self.edges.append(Edge(u, v, cost))
            self.adj[u].append((v, eid))
            self.adj[v].append((u, eid))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_between(self, u: int, v: int) -> int | None:
        for w, eid in self.adj[u]:
            if w == v:
                return eid
        return None

    def canonical_edges(self) -> list[Edge]:
        out = [Edge(min(e.u, e.v), max(e.u, e.v), e.cost) for e in self.edges]
        out.sort(key=lambda e: (e.u, e.v))
        return out

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.n, self.dest, self.canonical_edges()) == (
            other.n, other.dest, other.canonical_edges())

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m}, dest={self.dest})"


def _parse_number(tok: str, line: int, col: int):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        val = float(tok)
    except ValueError:
        raise GraphFormatError(f"expected a number, got {tok!r}", line, col) from None
    if math.isnan(val) or math.isinf(val):
        raise GraphFormatError(f"non-finite number {tok!r}", line, col)
    return val


def _tokens(line: str):
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield tok, col + 1
        col += len(tok)


def load_graph(text) -> WeightedGraph:
    """Parse the ``n m s`` / ``u v w`` text format.

    Accepts ``str`` or ``bytes``. Lines starting with ``#`` and blank lines
    are skipped.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    header = None
    edges = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = list(_tokens(raw))
        if len(toks) != 3:
            raise GraphFormatError(f"expected 3 fields, got {len(toks)}", lineno)
        if header is None:
            vals = []
            for tok, col in toks:
                val = _parse_number(tok, lineno, col)
                if not isinstance(val, int):
                    raise GraphFormatError(f"expected an integer, got {tok!r}", lineno, col)
                vals.append(val)
            n, m, s = vals
            if n < 1 or m < 0:
                raise GraphFormatError("node count must be positive and edge count non-negative", lineno)
            if not 0 <= s < n:
                raise GraphFormatError(f"destination {s} out of range", lineno, toks[2][1])
            header = (n, m, s)
            continue
        n = header[0]
        (tu, cu), (tv, cv), (tw, cw) = toks
        u = _parse_number(tu, lineno, cu)
        v = _parse_number(tv, lineno, cv)
        for val, tok, col in ((u, tu, cu), (v, tv, cv)):
            if not isinstance(val, int) or not 0 <= val < n:
                raise GraphFormatError(f"invalid node id {tok!r}", lineno, col)
        w = _parse_number(tw, lineno, cw)
        if w < 0:
            raise GraphFormatError(f"negative cost {tw}", lineno, cw)
        if u == v:
            raise GraphFormatError(f"self-loop at node {u}", lineno, cu)
        edges.append((u, v, w, lineno))
    if header is None:
        raise GraphFormatError("missing header line", last_line + 1)
    n, m, s = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}", last_line)
    seen = {}
    for u, v, _, lineno in edges:
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
    return WeightedGraph(n, [(u, v, w) for u, v, w, _ in edges], dest=s)


def _fmt_cost(c) -> str:
    if isinstance(c, float) and c.is_integer():
        return repr(c)
    return str(c)


def save_graph(g: WeightedGraph) -> bytes:
    lines = [f"{g.n} {g.m} {g.dest}"]
    for e in g.canonical_edges():
        lines.append(f"{e.u} {e.v} {_fmt_cost(e.cost)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def is_biconnected(g: WeightedGraph) -> bool:
    """Connected and free of articulation points (iterative lowpoint DFS)."""
    if g.n < 3:
        raise ValueError("biconnectivity is only defined here for n >= 3")
    disc = [-1] * g.n
    low = [0] * g.n
    disc[0] = low[0] = 0
    counter = 1
    root_children = 0
    # frames: (node, parent edge id, adjacency iterator)
    stack = [(0, -1, iter(g.adj[0]))]
    while stack:
        node, pedge, it = stack[-1]
        advanced = False
        for nbr, eid in it:
            if eid == pedge:
                continue
            if disc[nbr] == -1:
                disc[nbr] = low[nbr] = counter
                counter += 1
                stack.append((nbr, eid, iter(g.adj[nbr])))
                advanced = True
                break
            low[node] = min(low[node], disc[nbr])
        if advanced:
            continue
        stack.pop()
        if stack:
            parent = stack[-1][0]
            low[parent] = min(low[parent], low[node])
            if parent == 0:
                root_children += 1
            elif low[node] >= disc[parent]:
                return False
    if counter != g.n:
        return False
    return root_children <= 1


@dataclass(frozen=True)
class ShortestPathTree:
    root: int
    parent_edge: list
    parent: list
    dist: list
    children: list
    disc: list
    fin: list
    depth: list
    preorder: list = field(repr=False)

    def in_subtree(self, u: int, x: int) -> bool:
        """True iff ``u`` lies in the subtree rooted at ``x``."""
        return self.disc[x] <= self.disc[u] <= self.fin[x]

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while v != self.root:
            v = self.parent[v]
            path.append(v)
        return path

    def path_down(self, ancestor: int, v: int) -> list[int]:
        """Tree path from ``ancestor`` down to its descendant ``v``."""
        path = [v]
        while v != ancestor:
            v = self.parent[v]
            path.append(v)
        path.reverse()
        return path


def build_spt(g: WeightedGraph, s: int) -> ShortestPathTree:
    """Dijkstra from ``s``; ties prefer the smaller parent id, then edge id."""
    n = g.n
    inf = math.inf
    dist = [inf] * n
    parent = [None] * n
    parent_edge = [None] * n
    done = [False] * n
    dist[s] = 0
    pq = [(0, s)]
    while pq:
        d, u = heapq.heappop(pq)
        if done[u]:
            continue
        done[u] = True
        for v, eid in g.adj[u]:
            if done[v]:
                continue
            nd = d + g.edges[eid].cost
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                parent_edge[v] = eid
                heapq.heappush(pq, (nd, v))
            elif nd == dist[v] and (u, eid) < (parent[v], parent_edge[v]):
                parent[v] = u
                parent_edge[v] = eid
    missing = [v for v in range(n) if not done[v]]
    if missing:
        raise DisconnectedGraphError(f"nodes unreachable from {s}: {missing[:10]}")

    children = [[] for _ in range(n)]
    for v in range(n):
        if v != s:
            children[parent[v]].append(v)
    # appended in increasing v, so already sorted

    disc = [0] * n
    fin = [0] * n
    depth = [0] * n
    preorder = []
    counter = 0
    stack = [(s, 0)]
    while stack:
        node, idx = stack.pop()
        if idx == 0:
            disc[node] = counter
            counter += 1
            preorder.append(node)
        kids = children[node]
        if idx < len(kids):
            stack.append((node, idx + 1))
            child = kids[idx]
            depth[child] = depth[node] + 1
            stack.append((child, 0))
        else:
            fin[node] = counter - 1
    return ShortestPathTree(s, parent_edge, parent, dist, children, disc, fin, depth, preorder)


def bucket_by_nca(g: WeightedGraph, t: ShortestPathTree) -> list[list[int]]:
    """Group non-tree edges by the nearest common ancestor of their endpoints.

    Binary lifting; ancestry is decided with the DFS interval test.
    """
    n = g.n
    levels = max(1, (n - 1).bit_length())
    up = [[t.root if p is None else p for p in t.parent]]
    for _ in range(1, levels):
        prev = up[-1]
        up.append([prev[prev[v]] for v in range(n)])
    tree_edges = {eid for eid in t.parent_edge if eid is not None}
    disc, fin = t.disc, t.fin
    buckets = [[] for _ in range(n)]
    for eid, (p, q, _) in enumerate(g.edges):
        if eid in tree_edges:
            continue
        if disc[p] <= disc[q] <= fin[p]:
            w = p
        elif disc[q] <= disc[p] <= fin[q]:
            w = q
        else:
            w = p
            for k in range(levels - 1, -1, -1):
                a = up[k][w]
                if not (disc[a] <= disc[q] <= fin[a]):
                    w = a
            w = up[0][w]
        buckets[w].append(eid)
    return buckets
