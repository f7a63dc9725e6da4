"""Max-Min with small degrees: right degree at most two, or (2, 3).

Small neighborhoods leave few fair subsets, so each case collapses into
either a one-to-one matching in an auxiliary graph, a bipartiteness test
or a General Factor instance whose right-side lists encode the fair
subset sizes.
"""

from __future__ import annotations

from collections import Counter

import networkx as nx

from ..errors import InputError, InternalError
from ..matchflow import BipGraph, max_bipartite_matching
from ..model import Instance, Matching, Measure, verify
from .general_factor import GeneralFactorInstance, solve_general_factor_exact
from .two_colors import solve_two_colors


def _checked(instance: Instance, assign) -> Matching:
    matching = Matching(tuple(assign))
    verdict = verify(instance, matching)
    if not verdict.valid:
        raise InternalError(f"low-degree reconstruction failed: {verdict.violations[0]}")
    return matching


def _kind(instance: Instance, v: int) -> str:
    """'rainbow', 'mono' or 'mixed' (two of one color plus one other)."""
    counts = sorted(Counter(instance.left_colors[u] for u in instance.right_adj[v]).values())
    if not counts or counts[-1] == 1:
        return "rainbow"
    return "mono" if len(counts) == 1 else "mixed"


def _zero_fair(instance: Instance, v: int) -> bool:
    nbrs = instance.right_adj[v]
    return len(nbrs) == instance.num_colors and len({instance.left_colors[u] for u in nbrs}) == len(nbrs)


def _any_assignment(instance: Instance, nonempty: bool) -> Matching | None:
    """Every assignment is fair: only coverage of ``V`` can fail."""
    assign = [a[0] for a in instance.left_adj]
    if nonempty:
        graph = BipGraph(instance.k, instance.n, instance.right_adj)
        match = max_bipartite_matching(graph)
        if len(match) < instance.k:
            return None
        for v, u in match.items():
            assign[u] = v
    return _checked(instance, assign)


def _slot_matching(instance: Instance, slots: list[tuple[int, tuple[int, ...]]]) -> Matching | None:
    """Cover ``U`` by a one-to-one matching into unit slots ``(v, members)``."""
    adj: list[list[int]] = [[] for _ in range(instance.n)]
    for s, (_, members) in enumerate(slots):
        for u in members:
            adj[u].append(s)
    match = max_bipartite_matching(BipGraph(instance.n, len(slots), tuple(tuple(a) for a in adj)))
    if len(match) < instance.n:
        return None
    return _checked(instance, [slots[match[u]][0] for u in range(instance.n)])


def _general_factor(instance: Instance, spec) -> Matching | None:
    """``spec(v)`` gives ``(lists, inner edges, attach)`` for the gadget of ``v``.

    ``attach(u)`` names the gadget vertex a left neighbor ``u`` joins.
    """
    lists: list[frozenset[int]] = [frozenset({1})] * instance.n
    edges: list[tuple[int, int]] = []
    meaning: dict[int, tuple[int, int]] = {}
    for v in range(instance.k):
        glists, inner, attach = spec(v)
        base = len(lists)
        lists.extend(frozenset(l) for l in glists)
        edges.extend((base + a, base + b) for a, b in inner)
        for u in instance.right_adj[v]:
            meaning[len(edges)] = (u, v)
            edges.append((u, base + attach(u)))
    chosen = solve_general_factor_exact(GeneralFactorInstance(len(lists), tuple(edges), tuple(lists)))
    if chosen is None:
        return None
    assign = [-1] * instance.n
    for e in chosen:
        if e in meaning:
            u, v = meaning[e]
            assign[u] = v
    return _checked(instance, assign)


def _sizes(low: int, high: int, deg: int) -> range:
    return range(low, min(high, deg) + 1)


# ---------------------------------------------------------------------------
# right degree at most two


def _solve_deg2(instance: Instance, nonempty: bool) -> Matching | None:
    ell, C = instance.ell, instance.num_colors
    if ell >= 2:
        return _any_assignment(instance, nonempty)
    if ell == 0:
        if C == 2:
            return solve_two_colors(instance)
        # three or more colors: only the empty set is 0-fair
        return None
    low = 1 if nonempty else 0

    def spec(v):
        deg = len(instance.right_adj[v])
        top = 1 if _kind(instance, v) == "mono" else 2
        return [_sizes(low, top, deg)], (), lambda u: 0

    return _general_factor(instance, spec)


# ---------------------------------------------------------------------------
# left degree at most two, right degree three


def _solve_zero_23(instance: Instance) -> Matching | None:
    """ell = 0 with three colors: each ``v`` takes all of ``N(v)`` or nothing."""
    n, k = instance.n, instance.k
    adj = [set(a) for a in instance.left_adj]
    alive = [True] * k
    full = [_zero_fair(instance, v) for v in range(k)]
    taken = [False] * n
    assign = [-1] * n

    def drop(v: int) -> None:
        alive[v] = False
        for u in instance.right_adj[v]:
            adj[u].discard(v)

    for v in range(k):
        if not full[v]:
            drop(v)
    changed = True
    while changed:
        changed = False
        for u in range(n):
            if taken[u] or len(adj[u]) > 1:
                continue
            if not adj[u]:
                return None
            (v,) = adj[u]
            # v must take its whole neighborhood
            for w in instance.right_adj[v]:
                if taken[w]:
                    return None
                taken[w] = True
                assign[w] = v
            drop(v)
            for w in instance.right_adj[v]:
                for v2 in list(adj[w]):
                    drop(v2)
            changed = True
    g0 = nx.Graph()
    g0.add_nodes_from(v for v in range(k) if alive[v])
    for u in range(n):
        if not taken[u]:
            a, b = sorted(adj[u])
            g0.add_edge(a, b)
    if not nx.is_bipartite(g0):
        return None
    for comp in nx.connected_components(g0):
        side, _ = nx.bipartite.sets(g0.subgraph(comp))
        for v in side:
            for u in instance.right_adj[v]:
                assign[u] = v
    return _checked(instance, assign)


def _solve_23(instance: Instance, nonempty: bool) -> Matching | None:
    ell, C = instance.ell, instance.num_colors
    if ell >= 3:
        return _any_assignment(instance, nonempty)
    if ell == 0:
        if C >= 4:
            return None
        if nonempty:
            if any(len(a) != 1 for a in instance.left_adj):
                return None
            if not all(_zero_fair(instance, v) for v in range(instance.k)):
                return None
            return _checked(instance, [a[0] for a in instance.left_adj])
        return _solve_zero_23(instance)
    if nonempty:
        return _general_factor(instance, lambda v: _nonempty_gadget(instance, v))
    slots: list[tuple[int, tuple[int, ...]]] = []
    for v in range(instance.k):
        nbrs = instance.right_adj[v]
        kind = _kind(instance, v)
        if ell == 1 and kind == "mono":
            slots.append((v, nbrs))
        elif ell == 1 and kind == "mixed":
            by = Counter(instance.left_colors[u] for u in nbrs)
            pair = tuple(u for u in nbrs if by[instance.left_colors[u]] == 2)
            single = tuple(u for u in nbrs if by[instance.left_colors[u]] == 1)
            slots += [(v, pair), (v, single)]
        elif ell == 2 and kind == "mono" and len(nbrs) == 3:
            slots += [(v, nbrs), (v, nbrs)]
        else:
            slots += [(v, (u,)) for u in nbrs]
    return _slot_matching(instance, slots)


def _nonempty_gadget(instance: Instance, v: int):
    nbrs = instance.right_adj[v]
    deg = len(nbrs)
    kind = _kind(instance, v)
    if instance.ell == 2:
        top = 2 if kind == "mono" and deg == 3 else 3
        return [_sizes(1, top, deg)], (), lambda u: 0
    if kind == "rainbow":
        return [_sizes(1, 3, deg)], (), lambda u: 0
    if kind == "mono":
        return [_sizes(1, 1, deg)], (), lambda u: 0
    # two of one color plus one other: at most one from each class and
    # at least one overall; vertex 2 absorbs exactly one idle side
    by = Counter(instance.left_colors[u] for u in nbrs)
    return [{1}, {1}, {0, 1}], ((0, 2), (1, 2)), lambda u: 0 if by[instance.left_colors[u]] == 2 else 1


# ---------------------------------------------------------------------------


def lowdeg_applicable(instance: Instance) -> bool:
    small = instance.max_right_degree <= 2 or (instance.max_left_degree <= 2 and instance.max_right_degree <= 3)
    return instance.measure is Measure.MAXMIN and small and instance.at_most_nonempty


def solve_maxmin_lowdeg(instance: Instance) -> Matching | None:
    """Exact for Max-Min when right degree <= 2, or left <= 2 and right <= 3."""
    if instance.measure is not Measure.MAXMIN:
        raise InputError("solve_maxmin_lowdeg needs the Max-Min measure")
    if not lowdeg_applicable(instance):
        raise InputError("solve_maxmin_lowdeg needs right degree <= 2, or left <= 2 and right <= 3")
    nonempty = instance.size_min >= 1
    if any(not a for a in instance.left_adj):
        return None
    if nonempty and any(not a for a in instance.right_adj):
        return None
    if instance.num_colors == 1:
        return _any_assignment(instance, nonempty)
    if instance.max_right_degree <= 2:
        return _solve_deg2(instance, nonempty)
    if instance.num_colors == 2:
        return solve_two_colors(instance)
    return _solve_23(instance, nonempty)
