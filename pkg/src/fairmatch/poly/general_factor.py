"""Exact General Factor search.

Given a graph and an allowed-degree list per vertex, find a spanning
subgraph whose degrees all lie in their lists.  The search branches on
edges component by component and memoizes failed frontier states, which
keeps it fast on the gadget graphs built elsewhere in this package.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable

from ..errors import InputError, ResourceError


@dataclass(frozen=True)
class GeneralFactorInstance:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    lists: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        lists = tuple(frozenset(int(x) for x in l) for l in self.lists)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "lists", lists)
        if len(lists) != self.num_vertices:
            raise InputError("one degree list per vertex is required")
        seen = set()
        for a, b in edges:
            if a == b or not (0 <= a < self.num_vertices and 0 <= b < self.num_vertices):
                raise InputError(f"invalid edge ({a}, {b})")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise InputError(f"parallel edge {key}")
            seen.add(key)
        deg = self.degrees()
        for w, l in enumerate(lists):
            if any(x < 0 or x > deg[w] for x in l):
                raise InputError(f"degree list of vertex {w} leaves the range 0..{deg[w]}")

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def has_small_gaps(values: Iterable[int]) -> bool:
    """No two consecutive integers between min and max are missing."""
    vals = sorted(set(values))
    return all(b - a <= 2 for a, b in zip(vals, vals[1:]))


def lists_have_small_gaps(gf: GeneralFactorInstance) -> bool:
    return all(has_small_gaps(l) for l in gf.lists)


def _components(n: int, edges) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i, (a, _) in enumerate(edges):
        groups.setdefault(find(a), []).append(i)
    return list(groups.values())


def solve_general_factor_exact(gf: GeneralFactorInstance, node_limit: int = 2_000_000) -> frozenset[int] | None:
    """Indices of the chosen edges, or ``None`` if no factor exists."""
    n = gf.num_vertices
    deg = gf.degrees()
    for w in range(n):
        if deg[w] == 0 and 0 not in gf.lists[w]:
            return None
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(gf.edges):
        adj[a].append(i)
        adj[b].append(i)
    chosen: set[int] = set()
    budget = [node_limit]
    for comp in _components(n, gf.edges):
        got = _solve_component(gf, comp, adj, budget)
        if got is None:
            return None
        chosen |= got
    return frozenset(chosen)


def _solve_component(gf, comp_edges, adj, budget) -> set[int] | None:
    edges = gf.edges
    # breadth-first edge order keeps the frontier of half-decided vertices small
    start = edges[comp_edges[0]][0]
    order_v = [start]
    seen_v = {start}
    order_e: list[int] = []
    seen_e: set[int] = set()
    i = 0
    while i < len(order_v):
        w = order_v[i]
        i += 1
        for e in adj[w]:
            if e not in seen_e:
                seen_e.add(e)
                order_e.append(e)
                other = edges[e][0] if edges[e][1] == w else edges[e][1]
                if other not in seen_v:
                    seen_v.add(other)
                    order_v.append(other)
    lists = gf.lists
    cur = {w: 0 for w in order_v}
    rem = {w: len(adj[w]) for w in order_v}
    picked: list[int] = []
    failed: set[tuple] = set()

    def ok(w: int) -> bool:
        lo, hi = cur[w], cur[w] + rem[w]
        return any(lo <= d <= hi for d in lists[w])

    def key(pos: int) -> tuple:
        return (pos,) + tuple((w, cur[w]) for w in order_v if rem[w] and cur[w])

    def go(pos: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceError("general factor search exceeded its node budget")
        if pos == len(order_e):
            return True
        k = key(pos)
        if k in failed:
            return False
        e = order_e[pos]
        a, b = edges[e]
        rem[a] -= 1
        rem[b] -= 1
        for take in (1, 0):
            cur[a] += take
            cur[b] += take
            if ok(a) and ok(b):
                if take:
                    picked.append(e)
                if go(pos + 1):
                    return True
                if take:
                    picked.pop()
            cur[a] -= take
            cur[b] -= take
        rem[a] += 1
        rem[b] += 1
        failed.add(k)
        return False

    if not all(ok(w) for w in order_v):
        return None
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(order_e) + 1000))
    try:
        return set(picked) if go(0) else None
    finally:
        sys.setrecursionlimit(old)
