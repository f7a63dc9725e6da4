"""Two colors: reduction to a matching that saturates a vertex set.

Each right vertex ``v`` is replaced by a bank of small gadgets ``H1..H6``.
Left vertices of the first color may enter a gadget through its ``1*``
vertex, left vertices of the second color through its ``2*`` vertex, and
all ``s*`` vertices must be matched.  The multiplicities of the gadgets
depend only on ``ell``, the size lower bound ``p`` and ``n``; with them,
a pair of counts ``(m1, m2)`` can be absorbed by the bank exactly when
``m1 + m2 >= p`` and ``|m1 - m2| <= ell``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from ..errors import InputError, InternalError
from ..matchflow import saturating_matching
from ..model import Instance, Matching, verify

# gadget shapes: (vertices, edges, 1* vertex, 2* vertex, s* vertices).
# H1 must admit only (0, 0) and (1, 1); a path 1*-s*-s*-2* would also admit
# (1, 0) and (0, 1) since its two inner vertices can match each other, so
# H1 is a single edge with both ends in S.
GADGETS: dict[int, tuple[int, tuple, int | None, int | None, tuple[int, ...]]] = {
    1: (2, ((0, 1),), 0, 1, (0, 1)),
    2: (3, ((0, 1), (1, 2), (0, 2)), 0, 2, (0, 2)),
    3: (3, ((0, 1), (1, 2)), 0, 2, (0, 2)),
    4: (3, ((0, 1), (1, 2)), 0, 2, (1,)),
    5: (2, (), 0, 1, (0, 1)),
    6: (1, (), 0, 0, (0,)),
}

# boundary patterns (1* taken, 2* taken) each gadget can absorb
ADMISSIBLE: dict[int, frozenset[tuple[int, int]]] = {
    1: frozenset({(0, 0), (1, 1)}),
    2: frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}),
    3: frozenset({(0, 1), (1, 0), (1, 1)}),
    4: frozenset({(0, 0), (0, 1), (1, 0)}),
    5: frozenset({(1, 1)}),
    6: frozenset({(1, 0), (0, 1)}),
}


@dataclass(frozen=True)
class GadgetKit2C:
    multiplicities: tuple[int, int, int, int, int, int]

    @classmethod
    def for_parameters(cls, n: int, ell: int, p: int) -> "GadgetKit2C":
        return cls(gadget_multiplicities(n, ell, p))

    @property
    def admissible(self) -> dict[int, frozenset[tuple[int, int]]]:
        return ADMISSIBLE


def gadget_multiplicities(n: int, ell: int, p: int) -> tuple[int, int, int, int, int, int]:
    if min(n, ell, p) < 0:
        raise InputError("n, ell and p must be nonnegative")
    if ell == 0:
        return (n, 0, 0, 0, (p + 1) // 2, 0)
    if p < ell:
        return (n, 1, 0, ell - p - 1, 0, p)
    if (p - ell) % 2 == 0:
        return (n, 0, 1, 0, (p - ell) // 2, ell - 1)
    return (n, 0, 0, 1, (p - ell + 1) // 2, ell - 1)


def boundary_patterns(i: int) -> frozenset[tuple[int, int]]:
    """Recompute the admissible patterns of ``H_i`` by exhaustive matching."""
    size, edges, one, two, stars = GADGETS[i]
    out = set()
    for x1 in (0, 1):
        for x2 in (0, 1):
            if one == two and x1 and x2:
                continue  # a single vertex cannot take two left vertices
            g = nx.Graph()
            g.add_nodes_from(range(size))
            g.add_edges_from(edges)
            removed = {one} if x1 else set()
            if x2:
                removed.add(two)
            g.remove_nodes_from(removed)
            need = [s for s in stars if s not in removed]
            if saturating_matching(g, need) is not None:
                out.add((x1, x2))
    return frozenset(out)


def representable(m1: int, m2: int, p: int, ell: int, n: int | None = None) -> bool:
    """Whether the gadget bank for ``(n, ell, p)`` absorbs exactly ``m1``/``m2`` entries."""
    n = max(m1, m2) if n is None else n
    s = gadget_multiplicities(n, ell, p)
    reach = {(0, 0)}
    for i, copies in enumerate(s, start=1):
        step = _multiset_sums(i, copies)
        reach = {(a + x, b + y) for a, b in reach for x, y in step if a + x <= m1 and b + y <= m2}
    return (m1, m2) in reach


@lru_cache(maxsize=None)
def _multiset_sums(i: int, copies: int) -> frozenset[tuple[int, int]]:
    sums = {(0, 0)}
    for _ in range(copies):
        sums = {(a + x, b + y) for a, b in sums for x, y in ADMISSIBLE[i]}
    return frozenset(sums)


def build_two_color_graph(instance: Instance) -> tuple[nx.Graph, set, dict]:
    """``G'``, the set ``S`` to saturate, and a map gadget vertex -> right vertex."""
    s = gadget_multiplicities(instance.n, instance.ell, instance.size_min)
    g = nx.Graph()
    S: set = set()
    owner: dict = {}
    ports: list[tuple[list, list]] = []
    for v in range(instance.k):
        ones, twos = [], []
        for i, copies in enumerate(s, start=1):
            size, edges, one, two, stars = GADGETS[i]
            for j in range(copies):
                name = [("g", v, i, j, t) for t in range(size)]
                g.add_nodes_from(name)
                g.add_edges_from((name[a], name[b]) for a, b in edges)
                for t in range(size):
                    owner[name[t]] = v
                S.update(name[t] for t in stars)
                ones.append(name[one])
                twos.append(name[two])
        ports.append((ones, twos))
    for u, c in enumerate(instance.left_colors):
        g.add_node(("u", u))
        S.add(("u", u))
        for v in instance.left_adj[u]:
            for port in ports[v][c]:
                g.add_edge(("u", u), port)
    return g, S, owner


def solve_two_colors(instance: Instance) -> Matching | None:
    """Exact for two colors with any size lower bound and no upper bound."""
    if instance.num_colors != 2:
        raise InputError("solve_two_colors needs exactly two colors")
    if instance.upper_bounded:
        raise InputError("solve_two_colors does not handle size upper bounds")
    if any(not a for a in instance.left_adj):
        return None
    g, S, owner = build_two_color_graph(instance)
    match = saturating_matching(g, S)
    if match is None:
        return None
    assign = [-1] * instance.n
    for a, b in match:
        if a[0] == "u":
            a, b = b, a
        if b[0] == "u":
            assign[b[1]] = owner[a]
    matching = Matching(tuple(assign))
    verdict = verify(instance, matching)
    if not verdict.valid:
        raise InternalError(f"two-color reconstruction failed: {verdict.violations[0]}")
    return matching
