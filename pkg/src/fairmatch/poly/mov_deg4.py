"""MoV with right degree at most four, via General Factor.

Every right vertex ``v`` is replaced by a small gadget whose allowed
degree lists encode exactly which subsets of ``N(v)`` are ``ell``-fair
(and non-empty when required).  Left vertices get the list ``{1}`` and
are joined to the gadget vertex that stands for their color class in
``N(v)``; a general factor of the whole graph then corresponds to a fair
matching.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError, InternalError
from ..model import Instance, Matching, Measure, verify
from .general_factor import GeneralFactorInstance, has_small_gaps, solve_general_factor_exact


@dataclass(frozen=True)
class VertexGadget:
    """Gadget for one right vertex.

    ``lists[i]`` is the degree list of internal vertex ``i``; ``groups[j]``
    is the internal vertex that left vertices of the j-th largest color
    class of ``N(v)`` attach to.
    """

    lists: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]
    groups: tuple[int, ...]
    name: str = ""


def _g(lists, edges, groups, name) -> VertexGadget:
    return VertexGadget(tuple(frozenset(l) for l in lists), tuple(edges), tuple(groups), name)


_PAIR = ((0, 1),)
_TRIANGLE = ((0, 1), (0, 2), (1, 2))
_K4 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def gadget_for(counts: tuple[int, ...], ell: int, nonempty: bool) -> VertexGadget:
    """Gadget for a neighborhood with descending color counts ``counts``."""
    counts = tuple(c for c in counts if c)
    d = sum(counts)
    if d > 4:
        raise InputError("right degree above four")
    low = 1 if nonempty else 0
    if len(counts) <= 1:
        return _g([range(low, min(ell, d) + 1)], (), [0], "single-color")
    if ell >= counts[0]:
        return _g([range(low, d + 1)], (), [0] * len(counts), "free")
    key = (ell, counts, nonempty)
    if key not in _TABLE:
        raise InternalError(f"no gadget for counts {counts} at ell {ell}")
    return _TABLE[key]


_TABLE: dict[tuple, VertexGadget] = {}


def _add(ell, counts, plain: VertexGadget, nonempty: VertexGadget) -> None:
    _TABLE[(ell, counts, False)] = plain
    _TABLE[(ell, counts, True)] = nonempty


# ell = 2
_add(2, (3, 1),
     _g([{0, 1, 2, 3}, {1}], _PAIR, [0, 1], "l2-31"),
     # the second list needs the value 2: one majority vertex plus the
     # minority vertex is fair and is absorbed through the inner edge
     _g([{0, 2, 3}, {1, 2}], _PAIR, [0, 1], "l2-31-ne"))

# ell = 1
for _c in ((2, 1), (3, 1)):
    _add(1, _c,
         _g([{0, 1, 2}, {1}], _PAIR, [0, 1], f"l1-{_c}"),
         _g([{2}, {2}, {0, 1}], _TRIANGLE, [0, 1], f"l1-{_c}-ne"))
_add(1, (2, 2),
     _g([{1, 2}, {1, 2}], _PAIR, [0, 1], "l1-22"),
     _g([{2}, {2}, {0, 1}], _TRIANGLE, [0, 1], "l1-22-ne"))
_add(1, (2, 1, 1),
     _g([{0, 1, 2}, {1, 2}], _PAIR, [0, 1, 1], "l1-211"),
     _g([{3}, {3}, {3}, {0, 1, 2}], _K4, [0, 1, 2], "l1-211-ne"))

# ell = 0
_add(0, (1, 1), _g([{0, 2}], (), [0, 0], "l0-11"), _g([{2}], (), [0, 0], "l0-11-ne"))
for _c in ((2, 1), (3, 1)):
    _add(0, _c, _g([{1}, {1}], _PAIR, [0, 1], f"l0-{_c}"), _g([{1}, {1}], (), [0, 1], f"l0-{_c}-ne"))
_add(0, (1, 1, 1), _g([{0, 2, 3}], (), [0, 0, 0], "l0-111"), _g([{2, 3}], (), [0, 0, 0], "l0-111-ne"))
_add(0, (2, 2),
     _g([{2}, {2}, {1}, {1}], ((0, 1), (0, 2), (1, 3), (2, 3)), [0, 1], "l0-22"),
     _g([{2}, {2}, {1}, {1}], ((0, 2), (1, 3), (2, 3)), [0, 1], "l0-22-ne"))
_add(0, (2, 1, 1),
     _g([{1}, {1}, {1}, {0, 1, 3}], ((0, 3), (1, 3), (2, 3)), [0, 1, 2], "l0-211"),
     _g([{1}, {1}, {1}, {0, 1}], ((0, 3), (1, 3), (2, 3)), [0, 1, 2], "l0-211-ne"))
_add(0, (1, 1, 1, 1), _g([{0, 2, 3, 4}], (), [0] * 4, "l0-1111"), _g([{2, 3, 4}], (), [0] * 4, "l0-1111-ne"))


def neighborhood_profile(instance: Instance, v: int) -> tuple[list[list[int]], tuple[int, ...]]:
    """Color classes of ``N(v)``, largest first (ties by color id)."""
    classes: dict[int, list[int]] = {}
    for u in instance.right_adj[v]:
        classes.setdefault(instance.left_colors[u], []).append(u)
    ordered = sorted(classes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    groups = [members for _, members in ordered]
    return groups, tuple(len(g) for g in groups)


def build_general_factor(instance: Instance) -> tuple[GeneralFactorInstance, dict[int, tuple[int, int]]]:
    """Whole-instance General Factor graph and a map edge index -> (u, v)."""
    lists: list[frozenset[int]] = [frozenset({1})] * instance.n
    edges: list[tuple[int, int]] = []
    meaning: dict[int, tuple[int, int]] = {}
    for v in range(instance.k):
        groups, counts = neighborhood_profile(instance, v)
        gadget = gadget_for(counts, instance.ell, instance.size_min >= 1)
        base = len(lists)
        lists.extend(gadget.lists)
        edges.extend((base + a, base + b) for a, b in gadget.edges)
        for j, members in enumerate(groups):
            for u in members:
                meaning[len(edges)] = (u, v)
                edges.append((u, base + gadget.groups[j]))
    return GeneralFactorInstance(len(lists), tuple(edges), tuple(lists)), meaning


def solve_mov_deg4(instance: Instance) -> Matching | None:
    if instance.measure is not Measure.MOV:
        raise InputError("solve_mov_deg4 needs the MoV measure")
    if instance.max_right_degree > 4:
        raise InputError("solve_mov_deg4 needs right degree at most four")
    if not instance.at_most_nonempty:
        raise InputError("solve_mov_deg4 supports at most the non-emptiness constraint")
    if any(not a for a in instance.left_adj):
        return None
    gf, meaning = build_general_factor(instance)
    if not all(has_small_gaps(l) for l in gf.lists):
        raise InternalError("gadget lists must have gaps of size at most one")
    chosen = solve_general_factor_exact(gf)
    if chosen is None:
        return None
    assign = [-1] * instance.n
    for e in chosen:
        if e in meaning:
            u, v = meaning[e]
            assign[u] = v
    matching = Matching(tuple(assign))
    verdict = verify(instance, matching)
    if not verdict.valid:
        raise InternalError(f"degree-four reconstruction failed: {verdict.violations[0]}")
    return matching
