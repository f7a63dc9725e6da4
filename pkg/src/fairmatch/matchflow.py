"""Matching and flow kernels that turn ILP certificates into matchings.

* :func:`max_bipartite_matching` -- Hopcroft-Karp, lowest index first.
* :func:`construct_exact` -- ``|M(v)| = z_v`` via right-vertex clones.
* :func:`construct_bounded` / :func:`construct_capped` -- degree windows
  ``x_v <= |M(v)| <= y_v`` via max-flow with lower bounds.
* :func:`saturating_matching` -- general-graph matching covering a vertex
  set (blossom backend from networkx, exhaustive search for cross-checks).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .errors import InputError
from .model import Instance

INF = float("inf")


@dataclass(frozen=True)
class BipGraph:
    """Bipartite graph given by the adjacency lists of its left side."""

    num_left: int
    num_right: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        adj = tuple(tuple(sorted(set(a))) for a in self.adj)
        if len(adj) != self.num_left:
            raise InputError("adjacency list count differs from num_left")
        for a in adj:
            if a and not (0 <= a[0] and a[-1] < self.num_right):
                raise InputError("adjacency references an invalid right vertex")
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_edges(cls, num_left: int, num_right: int, edges: Iterable[tuple[int, int]]) -> "BipGraph":
        adj: list[list[int]] = [[] for _ in range(num_left)]
        for u, v in edges:
            adj[u].append(v)
        return cls(num_left, num_right, tuple(tuple(a) for a in adj))


@dataclass(frozen=True)
class DegreeBoundSpec:
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper):
            raise InputError("bound vectors differ in length")
        for lo, hi in zip(self.lower, self.upper):
            if not 0 <= lo <= hi:
                raise InputError(f"invalid degree window [{lo}, {hi}]")


# ---------------------------------------------------------------------------
# Hopcroft-Karp


class HopcroftKarp:
    """Maximum cardinality matching in a bipartite graph."""

    def __init__(self, graph: BipGraph):
        self.graph = graph
        self.pair_left = [-1] * graph.num_left
        self.pair_right = [-1] * graph.num_right
        self.dist: list[float] = []
        self.it: list[int] = []

    def _bfs(self) -> bool:
        adj = self.graph.adj
        self.dist = [INF] * self.graph.num_left
        queue = deque()
        for u in range(self.graph.num_left):
            if self.pair_left[u] == -1:
                self.dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = self.pair_right[v]
                if w == -1:
                    found = True
                elif self.dist[w] == INF:
                    self.dist[w] = self.dist[u] + 1
                    queue.append(w)
        return found

    def _dfs(self, root: int) -> bool:
        # iterative layered search; it[x] points at the edge currently tried
        adj, it = self.graph.adj, self.it
        stack = [root]
        while stack:
            u = stack[-1]
            descended = False
            while it[u] < len(adj[u]):
                v = adj[u][it[u]]
                w = self.pair_right[v]
                if w == -1:
                    for x in stack:
                        y = adj[x][it[x]]
                        self.pair_left[x] = y
                        self.pair_right[y] = x
                    return True
                if self.dist[w] == self.dist[u] + 1:
                    stack.append(w)
                    descended = True
                    break
                it[u] += 1
            if not descended:
                self.dist[u] = INF
                stack.pop()
                if stack:
                    it[stack[-1]] += 1
        return False

    def run(self) -> list[int]:
        while self._bfs():
            self.it = [0] * self.graph.num_left
            for u in range(self.graph.num_left):
                if self.pair_left[u] == -1:
                    self._dfs(u)
        return list(self.pair_left)


def max_bipartite_matching(graph: BipGraph) -> dict[int, int]:
    """Maximum one-to-one matching as a ``left -> right`` dict."""
    pairs = HopcroftKarp(graph).run()
    return {u: v for u, v in enumerate(pairs) if v != -1}


# ---------------------------------------------------------------------------
# max flow with lower bounds (Dinic)


class _FlowNet:
    def __init__(self, size: int):
        self.size = size
        self.head: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, a: int, b: int, cap: int) -> int:
        self.head[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(cap)
        self.head[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)
        return len(self.to) - 2

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        to, cap, head = self.to, self.cap, self.head
        while True:
            level = [-1] * self.size
            level[s] = 0
            queue = deque([s])
            while queue:
                a = queue.popleft()
                for e in head[a]:
                    if cap[e] > 0 and level[to[e]] < 0:
                        level[to[e]] = level[a] + 1
                        queue.append(to[e])
            if level[t] < 0:
                return total
            it = [0] * self.size

            def push(a: int, limit: int) -> int:
                if a == t:
                    return limit
                while it[a] < len(head[a]):
                    e = head[a][it[a]]
                    b = to[e]
                    if cap[e] > 0 and level[b] == level[a] + 1:
                        got = push(b, min(limit, cap[e]))
                        if got:
                            cap[e] -= got
                            cap[e ^ 1] += got
                            return got
                    it[a] += 1
                return 0

            while True:
                got = push(s, 1 << 60)
                if not got:
                    break
                total += got


def bounded_assignment(
    adj: Sequence[Sequence[int]], k: int, lower: Sequence[int], upper: Sequence[int]
) -> list[int] | None:
    """Assign every left vertex to a neighbor with ``lower[v] <= load(v) <= upper[v]``.

    ``adj[i]`` lists the right neighbors of left vertex ``i``.  Returns the
    partner list or ``None``.
    """
    m = len(adj)
    if sum(lower) > m or sum(upper) < m:
        return None
    # nodes: s, t, left 0..m-1, right 0..k-1, super source, super sink
    s, t = 0, 1
    left0, right0 = 2, 2 + m
    ss, tt = right0 + k, right0 + k + 1
    net = _FlowNet(tt + 1)
    excess = [0] * (tt + 1)
    edge_of: list[list[tuple[int, int]]] = []
    for i, nbrs in enumerate(adj):
        # s -> u with lower = upper = 1
        excess[left0 + i] += 1
        excess[s] -= 1
        edge_of.append([(v, net.add(left0 + i, right0 + v, 1)) for v in nbrs])
    for v in range(k):
        lo, hi = lower[v], upper[v]
        if lo > hi:
            return None
        if hi > lo:
            net.add(right0 + v, t, hi - lo)
        excess[t] += lo
        excess[right0 + v] -= lo
    net.add(t, s, m)
    need = 0
    for node, ex in enumerate(excess):
        if ex > 0:
            net.add(ss, node, ex)
            need += ex
        elif ex < 0:
            net.add(node, tt, -ex)
    if net.max_flow(ss, tt) != need:
        return None
    out = []
    for i in range(m):
        used = [v for v, e in edge_of[i] if net.cap[e] == 0]
        if len(used) != 1:
            return None
        out.append(used[0])
    return out


# ---------------------------------------------------------------------------
# per-color constructions


def _color_adj(instance: Instance, c: int, adj=None) -> tuple[tuple[int, ...], list]:
    if not 0 <= c < instance.num_colors:
        raise InputError(f"invalid color id {c}")
    members = instance.color_classes[c]
    source = instance.left_adj if adj is None else adj
    return members, [source[u] for u in members]


def exact_assignment(adj: Sequence[Sequence[int]], k: int, z: Sequence[int]) -> list[int] | None:
    """Clone expansion: right vertex ``v`` becomes ``z[v]`` unit-capacity copies."""
    if sum(z) != len(adj):
        raise InputError(f"targets sum to {sum(z)}, expected {len(adj)}")
    if any(x < 0 for x in z):
        raise InputError("negative target")
    offsets = [0]
    for x in z:
        offsets.append(offsets[-1] + x)
    clone_adj = [[c for v in nbrs for c in range(offsets[v], offsets[v + 1])] for nbrs in adj]
    graph = BipGraph(len(adj), offsets[-1], tuple(tuple(a) for a in clone_adj))
    match = max_bipartite_matching(graph)
    if len(match) != len(adj):
        return None
    owner = [v for v in range(k) for _ in range(z[v])]
    return [owner[match[i]] for i in range(len(adj))]


def construct_exact(instance: Instance, c: int, z: Sequence[int], adj=None) -> dict[int, int] | None:
    """Assign ``U_c`` with exactly ``z[v]`` vertices on each ``v``.

    ``adj`` optionally overrides the left adjacency (used for modified
    graphs).  Returns ``{u: v}`` or ``None``.
    """
    members, cadj = _color_adj(instance, c, adj)
    if len(z) != instance.k:
        raise InputError("target vector length differs from k")
    got = exact_assignment(cadj, instance.k, list(z))
    return None if got is None else dict(zip(members, got))


def construct_bounded(
    instance: Instance, c: int, bounds: DegreeBoundSpec, require_total: int | None = None, adj=None
) -> dict[int, int] | None:
    members, cadj = _color_adj(instance, c, adj)
    if require_total is not None and require_total != len(members):
        raise InputError("require_total must equal |U_c|")
    if len(bounds.lower) != instance.k:
        raise InputError("bound vector length differs from k")
    got = bounded_assignment(cadj, instance.k, bounds.lower, bounds.upper)
    return None if got is None else dict(zip(members, got))


def construct_capped(instance: Instance, c: int, caps: Sequence[int], adj=None) -> dict[int, int] | None:
    return construct_bounded(instance, c, DegreeBoundSpec((0,) * instance.k, tuple(caps)), adj=adj)


# ---------------------------------------------------------------------------
# general-graph matching covering a vertex set


def saturating_matching(graph: nx.Graph, S: Iterable) -> set[tuple] | None:
    """One-to-one matching of ``graph`` covering every vertex of ``S``.

    Edge weight counts the endpoints in ``S``; a maximum-weight matching
    covers all of ``S`` iff its weight equals ``|S|``.
    """
    S = set(S)
    missing = S - set(graph.nodes)
    if missing:
        raise InputError(f"vertices {sorted(map(str, missing))[:3]} not in graph")
    weighted = nx.Graph()
    for a, b in graph.edges():
        w = (a in S) + (b in S)
        if w:
            weighted.add_edge(a, b, weight=w)
    if any(s not in weighted for s in S):
        return None
    match = nx.max_weight_matching(weighted, maxcardinality=False, weight="weight")
    covered = {x for e in match for x in e}
    if not S <= covered:
        return None
    return {tuple(e) for e in match}


def saturating_matching_search(graph: nx.Graph, S: Iterable) -> set[tuple] | None:
    """Exhaustive reference backend for :func:`saturating_matching`."""
    order = sorted(S, key=repr)
    nbrs = {x: sorted(graph.neighbors(x), key=repr) for x in graph.nodes}
    failed: set[frozenset] = set()

    def go(used: frozenset, chosen: list) -> list | None:
        todo = [x for x in order if x not in used]
        if not todo:
            return chosen
        if used in failed:
            return None
        x = todo[0]
        for y in nbrs[x]:
            if y not in used:
                got = go(used | {x, y}, chosen + [(x, y)])
                if got is not None:
                    return got
        failed.add(used)
        return None

    got = go(frozenset(), [])
    return None if got is None else set(got)
