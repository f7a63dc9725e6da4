"""Instance generators.

Random families for testing and benchmarking, plus three hardness
reductions that map 3-dimensional matching and a restricted SAT variant
to fair matching instances with small degrees.  Reduction outputs use
canonical vertex orders (sorted gadget labels), so they are reproducible
byte for byte.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .model import Instance, Measure

# ---------------------------------------------------------------------------
# random families


def random_instance(
    n: int,
    k: int,
    num_colors: int,
    ell: int = 0,
    measure: Measure | str = Measure.MOV,
    seed: int | None = None,
    edge_prob: float = 0.5,
    max_left_degree: int | None = None,
    max_right_degree: int | None = None,
    min_left_degree: int = 0,
    size_min: int = 0,
    size_max: int | None = None,
) -> Instance:
    """Random colored bipartite graph.

    Edges appear independently with ``edge_prob``.  Degree caps are
    enforced by dropping random surplus edges, first on the left, then on
    the right.  ``min_left_degree`` tops up left vertices with random edges
    before the right cap is applied, so it is a best-effort target.
    """
    if n < 1 or k < 1 or num_colors < 1:
        raise InputError("n, k and num_colors must be positive")
    for name, cap in (("max_left_degree", max_left_degree), ("max_right_degree", max_right_degree)):
        if cap is not None and cap < 1:
            raise InputError(f"{name} must be at least 1")
    if not 0.0 <= edge_prob <= 1.0:
        raise InputError("edge_prob must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    colors = rng.integers(0, num_colors, size=n)
    adj = rng.random((n, k)) < edge_prob
    want = min(min_left_degree, k, max_left_degree or k)
    for u in range(n):
        missing = want - int(adj[u].sum())
        if missing > 0:
            free = np.flatnonzero(~adj[u])
            adj[u, rng.choice(free, size=missing, replace=False)] = True
        if max_left_degree is not None and adj[u].sum() > max_left_degree:
            have = np.flatnonzero(adj[u])
            drop = rng.choice(have, size=len(have) - max_left_degree, replace=False)
            adj[u, drop] = False
    if max_right_degree is not None:
        for v in range(k):
            have = np.flatnonzero(adj[:, v])
            if len(have) > max_right_degree:
                adj[rng.choice(have, size=len(have) - max_right_degree, replace=False), v] = False
    edges = tuple((int(u), int(v)) for u, v in zip(*np.nonzero(adj)))
    return Instance(num_colors, tuple(int(c) for c in colors), k, edges, ell, Measure(measure), size_min, size_max)


def complete_instance(counts, k: int, ell: int, measure: Measure | str, size_min: int = 0) -> Instance:
    """Complete bipartite instance with the given per-color counts."""
    colors = tuple(c for c, m in enumerate(counts) for _ in range(m))
    if not colors:
        raise InputError("counts must contain at least one vertex")
    edges = tuple((u, v) for u in range(len(colors)) for v in range(k))
    return Instance(len(counts), colors, k, edges, ell, Measure(measure), size_min)


def planted_instance(
    k: int,
    num_colors: int,
    ell: int,
    measure: Measure | str,
    seed: int | None = None,
    group_size: tuple[int, int] = (1, 4),
    extra_edge_prob: float = 0.1,
    max_groups_colors: int | None = None,
) -> Instance:
    """Instance with a known fair matching hidden among random extra edges.

    Each right vertex receives a random ``ell``-fair color multiset; the
    left vertices of that multiset are joined to it and to a few random
    other right vertices.
    """
    from .model import fairness  # local import keeps the module header light

    rng = np.random.default_rng(seed)
    colors: list[int] = []
    home: list[int] = []
    palette = num_colors if max_groups_colors is None else min(num_colors, max_groups_colors)
    for v in range(k):
        for _ in range(200):
            size = int(rng.integers(group_size[0], group_size[1] + 1))
            group = rng.integers(0, palette, size=size)
            counts = np.bincount(group, minlength=num_colors)
            if fairness(measure, counts) <= ell:
                break
        else:
            group = np.arange(num_colors)
        colors.extend(int(c) for c in group)
        home.extend([v] * len(group))
    edges = set()
    for u, v in enumerate(home):
        edges.add((u, v))
        for w in range(k):
            if w != v and rng.random() < extra_edge_prob:
                edges.add((u, w))
    if not colors:
        raise InputError("planted instance came out empty; widen group_size")
    return Instance(num_colors, tuple(colors), k, tuple(sorted(edges)), ell, Measure(measure))


# ---------------------------------------------------------------------------
# source problems


@dataclass(frozen=True)
class ThreeDMInstance:
    """Triples over ``X = Y = Z = range(size)`` style ground sets."""

    size_x: int
    size_y: int
    size_z: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        triples = tuple(sorted({tuple(int(a) for a in t) for t in self.triples}))
        object.__setattr__(self, "triples", triples)
        sizes = (self.size_x, self.size_y, self.size_z)
        if min(sizes) < 0:
            raise InputError("set sizes must be nonnegative")
        for t in triples:
            if any(not 0 <= t[i] < sizes[i] for i in range(3)):
                raise InputError(f"triple {t} references an element outside its set")
        for i in range(3):
            occ = np.bincount([t[i] for t in triples], minlength=sizes[i]) if triples else np.zeros(sizes[i], int)
            if len(occ) and occ.max() > 3:
                raise InputError("an element occurs in more than three triples")

    def occurrences(self, axis: int, element: int) -> list[int]:
        return [j for j, t in enumerate(self.triples) if t[axis] == element]


def has_perfect_3dm(inst: ThreeDMInstance) -> bool:
    """Brute force: is there a set of triples covering every element exactly once?"""
    q = inst.size_x
    if not (inst.size_x == inst.size_y == inst.size_z):
        return False
    if q == 0:
        return True
    for combo in itertools.combinations(inst.triples, q):
        if all(len({t[i] for t in combo}) == q for i in range(3)):
            return True
    return False


@dataclass(frozen=True)
class CnfInstance:
    """Clauses of exactly three literals over variables ``1..num_vars``.

    A literal is a nonzero integer; ``-x`` is the negation of ``x``.  Every
    variable must occur exactly twice positively and twice negatively.
    """

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 1:
            raise InputError("need at least one variable")
        for c in clauses:
            if len(c) != 3:
                raise InputError(f"clause {c} does not have exactly three literals")
            if any(l == 0 or abs(l) > self.num_vars for l in c):
                raise InputError(f"clause {c} references an unknown variable")
        for x in range(1, self.num_vars + 1):
            pos = sum(c.count(x) for c in clauses)
            neg = sum(c.count(-x) for c in clauses)
            if pos != 2 or neg != 2:
                raise InputError(f"variable {x} occurs {pos}+/{neg}- times, expected 2+/2-")


def is_satisfiable(cnf: CnfInstance) -> bool:
    for bits in itertools.product((False, True), repeat=cnf.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in cnf.clauses):
            return True
    return False


def random_3dm(size: int, num_triples: int, seed: int | None = None, max_tries: int = 1000) -> ThreeDMInstance:
    """Random triples over three sets of equal ``size``, each element in <= 3 triples."""
    if size < 0 or num_triples < 0:
        raise InputError("size and num_triples must be nonnegative")
    if num_triples > 3 * size or num_triples > size**3:
        raise InputError("too many triples for the occurrence bound")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        load = np.zeros((3, size), dtype=int)
        chosen: set[tuple[int, int, int]] = set()
        while len(chosen) < num_triples:
            free = [np.flatnonzero(load[i] < 3) for i in range(3)]
            if any(len(f) == 0 for f in free):
                break
            t = tuple(int(rng.choice(f)) for f in free)
            if t in chosen:
                # finite retry budget: give up on this attempt if stuck
                if rng.random() < 0.01:
                    break
                continue
            chosen.add(t)
            for i in range(3):
                load[i, t[i]] += 1
        if len(chosen) == num_triples:
            return ThreeDMInstance(size, size, size, tuple(chosen))
    raise InputError("could not sample triples under the occurrence bound")


def random_sat4occ(num_vars: int, seed: int | None = None, max_tries: int = 10_000) -> CnfInstance:
    """Random formula with every variable occurring exactly 2+/2- times.

    There are ``4 * num_vars`` literal slots, so ``num_vars`` must be a
    multiple of 3 to fill clauses of size three.  Clauses never repeat a
    variable.
    """
    if num_vars < 1 or num_vars % 3:
        raise InputError("num_vars must be a positive multiple of 3")
    rng = np.random.default_rng(seed)
    literals = np.array([s * x for x in range(1, num_vars + 1) for s in (1, 1, -1, -1)])
    for _ in range(max_tries):
        perm = rng.permutation(literals).reshape(-1, 3)
        if all(len({abs(int(l)) for l in row}) == 3 for row in perm):
            return CnfInstance(num_vars, tuple(tuple(int(l) for l in row) for row in perm))
    raise InputError("failed to sample a clause layout without repeated variables")


# ---------------------------------------------------------------------------
# reductions


class _Builder:
    """Collects labelled vertices and edges, then indexes labels in sorted order."""

    def __init__(self):
        self.left: dict[str, int] = {}
        self.right: set[str] = set()
        self.edges: set[tuple[str, str]] = set()

    def lv(self, label: str, color: int) -> str:
        self.left[label] = color
        return label

    def rv(self, label: str) -> str:
        self.right.add(label)
        return label

    def edge(self, u: str, v: str) -> None:
        self.edges.add((u, v))

    def build(self, num_colors: int, ell: int, measure: Measure) -> tuple[Instance, list[str], list[str]]:
        lnames = sorted(self.left)
        rnames = sorted(self.right)
        li = {x: i for i, x in enumerate(lnames)}
        ri = {x: i for i, x in enumerate(rnames)}
        edges = tuple(sorted((li[u], ri[v]) for u, v in self.edges))
        inst = Instance(num_colors, tuple(self.left[x] for x in lnames), len(rnames), edges, ell, measure)
        return inst, lnames, rnames


ALPHA, BETA, GAMMA = 0, 1, 2


def reduce_3dm_maxmin33(t: ThreeDMInstance, labels: bool = False):
    """Max-Min, three colors, ``ell = 0``: one right vertex per triple."""
    b = _Builder()
    names = ("x", "y", "z")
    for axis, size in enumerate((t.size_x, t.size_y, t.size_z)):
        for e in range(size):
            b.lv(f"{names[axis]}{e:03d}", axis)
    for j, tri in enumerate(t.triples):
        v = b.rv(f"t{j:03d}")
        for axis in range(3):
            b.edge(f"{names[axis]}{tri[axis]:03d}", v)
    if not b.right:
        b.rv("t_dummy")  # an instance needs k >= 1; the dummy has no edges
    out = b.build(3, 0, Measure.MAXMIN)
    return out if labels else out[0]


def reduce_3dm_maxmin24(t: ThreeDMInstance, labels: bool = False):
    """Max-Min, three colors, ``ell = 0``, left degree <= 2 and right degree <= 4.

    Every element ``s`` gets right vertices ``v1..v3`` and left vertices
    ``u1..u3`` (own color), ``a1, a2`` and ``b1, b2`` (the two other
    colors).  ``u^i`` joins ``v^i`` and the i-th triple containing ``s``.
    Inside the gadget ``a1`` joins ``v1, v3``; ``b1`` joins ``v2, v3``;
    ``a2`` and ``b2`` both join ``v1, v2``.
    """
    b = _Builder()
    names = ("x", "y", "z")
    # colors (u, a, b) per axis: X -> (α, β, γ), Y -> (β, γ, α), Z -> (γ, α, β)
    palette = ((ALPHA, BETA, GAMMA), (BETA, GAMMA, ALPHA), (GAMMA, ALPHA, BETA))
    for j in range(len(t.triples)):
        b.rv(f"t{j:03d}")
    for axis, size in enumerate((t.size_x, t.size_y, t.size_z)):
        cu, ca, cb = palette[axis]
        for e in range(size):
            s = f"{names[axis]}{e:03d}"
            v = [b.rv(f"{s}_v{i}") for i in (1, 2, 3)]
            occ = t.occurrences(axis, e)
            for i in range(3):
                u = b.lv(f"{s}_u{i + 1}", cu)
                b.edge(u, v[i])
                if i < len(occ):
                    b.edge(u, f"t{occ[i]:03d}")
            a1, a2 = b.lv(f"{s}_a1", ca), b.lv(f"{s}_a2", ca)
            b1, b2 = b.lv(f"{s}_b1", cb), b.lv(f"{s}_b2", cb)
            for u, vs in ((a1, (0, 2)), (b1, (1, 2)), (a2, (0, 1)), (b2, (0, 1))):
                for i in vs:
                    b.edge(u, v[i])
    if not b.right:
        b.rv("t_dummy")
    out = b.build(3, 0, Measure.MAXMIN)
    return out if labels else out[0]


def reduce_sat_mov25(cnf: CnfInstance, labels: bool = False):
    """MoV, three colors, ``ell = 0``, left degree <= 2 and right degree <= 5."""
    b = _Builder()
    occurrence: dict[int, list[tuple[int, int]]] = {}
    for y, clause in enumerate(cnf.clauses):
        for i, lit in enumerate(clause):
            occurrence.setdefault(lit, []).append((y, i))
    for x in range(1, cnf.num_vars + 1):
        px = f"x{x:03d}"
        ux = b.lv(f"{px}_u", ALPHA)
        for sign in ("+", "-"):
            v = b.rv(f"{px}_v{sign}")
            b.edge(ux, v)
            for tag, color in (("a", ALPHA), ("b", BETA), ("1", GAMMA), ("2", GAMMA)):
                b.edge(b.lv(f"{px}_u{sign}{tag}", color), v)
    for y in range(len(cnf.clauses)):
        py = f"y{y:03d}"
        uy = b.lv(f"{py}_u", ALPHA)
        vy, vy_prime = b.rv(f"{py}_v"), b.rv(f"{py}_w")
        b.edge(uy, vy)
        b.edge(uy, vy_prime)
        for i in (1, 2):
            ui = b.lv(f"{py}_u{i}", ALPHA)
            vi = b.rv(f"{py}_v{i}")
            b.edge(ui, vy)
            b.edge(ui, vi)
            b.edge(b.lv(f"{py}_u{i}b", BETA), vi)
            b.edge(b.lv(f"{py}_u{i}c", GAMMA), vi)
    # literal occurrence j of x (positive or negative) links u_x^{±,j} to the clause
    for x in range(1, cnf.num_vars + 1):
        for lit, sign in ((x, "+"), (-x, "-")):
            for j, (y, i) in enumerate(occurrence.get(lit, [])):
                u = f"x{x:03d}_u{sign}{j + 1}"
                target = f"y{y:03d}_w" if i == 2 else f"y{y:03d}_v"
                b.edge(u, target)
    out = b.build(3, 0, Measure.MOV)
    return out if labels else out[0]
