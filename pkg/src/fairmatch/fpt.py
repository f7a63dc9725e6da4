"""Parameterized solvers built on integer feasibility models.

Every solver materializes Hall-type constraints over all ``2^k`` subsets
``W`` of the right side, asks :mod:`fairmatch.ilp` for an integer point,
and turns that point into a matching with the constructions of
:mod:`fairmatch.matchflow`.  Returned matchings are always re-verified.

* :func:`solve_kc` -- per-color load variables, parameter ``k + |C|``.
* :func:`solve_maxmin_k` -- load windows ``[x_v, y_v]``, parameter ``k``.
* :func:`solve_maxmin_k_nonempty` -- adds guessed witness structure.
* :func:`solve_targeted_mov` / :func:`solve_mov_k` -- MoV with guessed top
  colors, driven by random color coding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InputError, InternalError, ResourceError
from .ilp import DEFAULT_MAX_VARS, IlpModel, solve_feasibility
from .matchflow import BipGraph, DegreeBoundSpec, construct_bounded, construct_capped, construct_exact, max_bipartite_matching
from .model import Instance, Matching, Measure, verify
from .setfn import neighborhood_tables

DEFAULT_K_CAP = 3
DEFAULT_ROUNDS_CAP = 20_000
MOV_K_CAP = 4  # token partitions grow like Bell(2k)


# ---------------------------------------------------------------------------
# helpers


def _members(mask: int, k: int) -> list[int]:
    return [v for v in range(k) if mask >> v & 1]


def _has_isolated(instance: Instance) -> bool:
    return any(not a for a in instance.left_adj)


def _with_phantom_color(instance: Instance) -> Instance:
    # one extra, empty color turns "second-largest := 0" into an ordinary count
    return instance.replace(num_colors=2) if instance.num_colors == 1 else instance


def _assemble(instance: Instance, parts: Sequence[dict[int, int]]) -> Matching:
    assign = [-1] * instance.n
    for part in parts:
        for u, v in part.items():
            assign[u] = v
    if -1 in assign:
        raise InternalError("reconstruction left a vertex unassigned")
    return Matching(tuple(assign))


def _checked(instance: Instance, matching: Matching, who: str) -> Matching:
    verdict = verify(instance, matching)
    if not verdict.valid:
        raise InternalError(f"{who} built an invalid matching: {verdict.violations[0]}")
    return matching


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions, in restricted-growth-string order."""
    items = list(items)
    if not items:
        yield []
        return

    def grow(i: int, blocks: list[list]) -> Iterator[list[list]]:
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(items[i])
            yield from grow(i + 1, blocks)
            b.pop()
        blocks.append([items[i]])
        yield from grow(i + 1, blocks)
        blocks.pop()

    yield from grow(0, [])


# ---------------------------------------------------------------------------
# k + |C|


def build_kc_model(instance: Instance) -> IlpModel:
    """The per-color load model; works for every size constraint."""
    inst = _with_phantom_color(instance) if instance.measure is Measure.MOV else instance
    k, C, n = inst.k, inst.num_colors, inst.n
    nu, nn = neighborhood_tables(inst)
    cnt = inst.color_counts
    m = IlpModel("kc")
    for v in range(k):
        for c in range(C):
            m.add_var(("z", v, c), 0, cnt[c])
    for c in range(C):
        for w in range(1, 1 << k):
            terms = {("z", v, c): 1 for v in _members(w, k)}
            m.ge(terms, int(nu[c, w]))
            m.le(terms, int(nn[c, w]))
    for v in range(k):
        if instance.measure is Measure.MAXMIN:
            for c, d in itertools.permutations(range(C), 2):
                m.le({("z", v, d): 1, ("z", v, c): -1}, inst.ell)
        else:
            for c in range(C):
                m.add_var(("a", v, c), 0, 1)
                m.add_var(("b", v, c), 0, 1)
            m.eq({("a", v, c): 1 for c in range(C)}, 1)
            m.eq({("b", v, c): 1 for c in range(C)}, 1)
            for c in range(C):
                m.le({("a", v, c): 1, ("b", v, c): 1}, 1)
            for c, d in itertools.permutations(range(C), 2):
                zc, zd = ("z", v, c), ("z", v, d)
                # a-color dominates the b-color
                m.ge({zc: 1, zd: -1, ("a", v, c): -n, ("b", v, d): -n}, -2 * n)
                # b-color dominates every color other than the a-color
                m.ge({zc: 1, zd: -1, ("b", v, c): -n, ("a", v, d): n}, -n)
                # fairness between the a-color and the b-color
                m.le({zc: 1, zd: -1, ("a", v, c): n, ("b", v, d): n}, inst.ell + 2 * n)
        total = {("z", v, c): 1 for c in range(C)}
        if inst.size_min:
            m.ge(total, inst.size_min)
        if inst.size_max is not None:
            m.le(total, inst.size_max)
    return m


def solve_kc(instance: Instance, max_vars: int = DEFAULT_MAX_VARS) -> Matching | None:
    """Exact solver with per-color load variables (any size bounds)."""
    if _has_isolated(instance):
        return None
    model = build_kc_model(instance)
    sol = solve_feasibility(model, max_vars=max_vars)
    if sol is None:
        return None
    parts = []
    for c in range(instance.num_colors):
        z = [sol[("z", v, c)] for v in range(instance.k)]
        part = construct_exact(instance, c, z)
        if part is None:
            raise InternalError(f"color {c}: load vector {z} passed the model but has no matching")
        parts.append(part)
    return _checked(instance, _assemble(instance, parts), "solve_kc")


# ---------------------------------------------------------------------------
# Max-Min, parameter k


@dataclass
class _MaxMinData:
    nu_max: np.ndarray  # max_c nu_c(W)
    n_min: np.ndarray  # min_c N_c(W)
    nu: np.ndarray
    nn: np.ndarray


def _maxmin_data(instance: Instance) -> _MaxMinData:
    nu, nn = neighborhood_tables(instance)
    return _MaxMinData(nu.max(axis=0), nn.min(axis=0), nu, nn)


def build_maxmin_model(
    instance: Instance,
    data: _MaxMinData | None = None,
    y_floor: Sequence[int] | None = None,
    x_cap: Sequence[int] | None = None,
    nonempty_zero: bool = False,
) -> IlpModel:
    """Window model; ``y_floor``/``x_cap`` strengthen the per-``W`` bounds."""
    data = data or _maxmin_data(instance)
    k, n, ell = instance.k, instance.n, instance.ell
    m = IlpModel("maxmin_k")
    for v in range(k):
        m.add_var(("x", v), 0, n)
        m.add_var(("y", v), 1 if nonempty_zero else 0, n)
        m.le({("x", v): 1, ("y", v): -1}, 0)
        m.le({("y", v): 1, ("x", v): -1}, ell)
    for w in range(1, 1 << k):
        vs = _members(w, k)
        lo = int(data.nu_max[w]) if y_floor is None else max(int(data.nu_max[w]), int(y_floor[w]))
        hi = int(data.n_min[w]) if x_cap is None else min(int(data.n_min[w]), int(x_cap[w]))
        m.ge({("y", v): 1 for v in vs}, lo)
        m.le({("x", v): 1 for v in vs}, hi)
    return m


def _maxmin_reconstruct(instance: Instance, sol: dict, adj_override=None, who="solve_maxmin_k") -> Matching:
    k = instance.k
    bounds = DegreeBoundSpec(tuple(sol[("x", v)] for v in range(k)), tuple(sol[("y", v)] for v in range(k)))
    parts = []
    for c in range(instance.num_colors):
        part = construct_bounded(instance, c, bounds, adj=adj_override)
        if part is None:
            raise InternalError(f"{who}: color {c} has no matching within the certified windows")
        parts.append(part)
    return _checked(instance, _assemble(instance, parts), who)


def solve_maxmin_k(instance: Instance) -> Matching | None:
    if instance.measure is not Measure.MAXMIN:
        raise InputError("solve_maxmin_k needs the Max-Min measure")
    if not instance.size_free:
        raise InputError("solve_maxmin_k does not take size constraints")
    if _has_isolated(instance):
        return None
    sol = solve_feasibility(build_maxmin_model(instance))
    if sol is None:
        return None
    return _maxmin_reconstruct(instance, sol)


# ---------------------------------------------------------------------------
# Max-Min, parameter k, non-emptiness


@dataclass(frozen=True)
class GuessContext:
    """One guess: neighborhoods ``mu``, a partition of ``V``, and per-block signatures."""

    mu: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    signatures: tuple[int, ...]  # index into the realized signature list, per block


def _color_signatures(instance: Instance, data: _MaxMinData) -> list[tuple[np.ndarray, np.ndarray]]:
    k = instance.k
    X = np.minimum(data.nn - data.n_min[None, :], k)
    Y = np.minimum(data.nu_max[None, :] - data.nu, k)
    return [(X[c], Y[c]) for c in range(instance.num_colors)]


def solve_maxmin_k_nonempty(instance: Instance, k_cap: int = DEFAULT_K_CAP) -> Matching | None:
    """Max-Min with ``|M(v)| >= 1`` for every right vertex."""
    if instance.measure is not Measure.MAXMIN:
        raise InputError("solve_maxmin_k_nonempty needs the Max-Min measure")
    if not instance.nonempty:
        raise InputError("solve_maxmin_k_nonempty needs exactly the non-emptiness constraint")
    if instance.k > k_cap:
        raise ResourceError(f"k = {instance.k} exceeds the configured cap {k_cap}")
    k, n = instance.k, instance.n
    if n < k or _has_isolated(instance) or any(not a for a in instance.right_adj):
        return None
    data = _maxmin_data(instance)
    if instance.ell == 0:
        sol = solve_feasibility(build_maxmin_model(instance, data, nonempty_zero=True))
        return None if sol is None else _maxmin_reconstruct(instance, sol, who="solve_maxmin_k_nonempty")
    # the base model is a relaxation; if it fails, every guess fails
    if solve_feasibility(build_maxmin_model(instance, data)) is None:
        return None
    return _nonempty_search(instance, data)


def _nonempty_search(instance: Instance, data: _MaxMinData) -> Matching | None:
    k, C = instance.k, instance.num_colors
    masks = instance.left_masks
    realized = [sorted({masks[u] for u in instance.right_adj[v]}) for v in range(k)]

    sigs = _color_signatures(instance, data)
    sig_keys: list[tuple] = []
    sig_of_color: list[int] = []
    for X, Y in sigs:
        key = (tuple(X.tolist()), tuple(Y.tolist()))
        if key not in sig_keys:
            sig_keys.append(key)
        sig_of_color.append(sig_keys.index(key))

    # u's of color c grouped by exact neighborhood
    by_color_mask: dict[tuple[int, int], list[int]] = {}
    for u, c in enumerate(instance.left_colors):
        by_color_mask.setdefault((c, masks[u]), []).append(u)

    witness_cache: dict[tuple, dict[int, int] | None] = {}

    def witness(c: int, block: tuple[int, ...], mu: tuple[int, ...]) -> dict[int, int] | None:
        key = (c, block, tuple(mu[v] for v in block))
        if key not in witness_cache:
            cands = [by_color_mask.get((c, mu[v]), []) for v in block]
            pool = sorted({u for cs in cands for u in cs})
            pos = {u: i for i, u in enumerate(pool)}
            graph = BipGraph(len(block), len(pool), tuple(tuple(pos[u] for u in cs) for cs in cands))
            got = max_bipartite_matching(graph)
            witness_cache[key] = {block[i]: pool[j] for i, j in got.items()} if len(got) == len(block) else None
        return witness_cache[key]

    ilp_cache: dict[tuple, dict | None] = {}
    full = 1 << k
    for mu in itertools.product(*realized):
        for blocks in set_partitions(range(k)):
            blocks_t = tuple(tuple(b) for b in blocks)
            options = []
            for block in blocks_t:
                opts = sorted({sig_of_color[c] for c in range(C) if witness(c, block, mu) is not None})
                options.append(opts)
            if any(not o for o in options):
                continue
            for choice in itertools.product(*options):
                # a distinct color per block, each matching its block's signature
                cand = tuple(
                    tuple(c for c in range(C) if sig_of_color[c] == s and witness(c, block, mu) is not None)
                    for block, s in zip(blocks_t, choice)
                )
                h = max_bipartite_matching(BipGraph(len(blocks_t), C, cand))
                if len(h) != len(blocks_t):
                    continue
                y_floor = [0] * full
                x_cap = [instance.n] * full
                for block, s in zip(blocks_t, choice):
                    X, Y = sig_keys[s]
                    bset = set(block)
                    for w in range(1, full):
                        alpha = sum(1 for v in bset if w >> v & 1 and mu[v] & ~w)
                        beta = sum(1 for v in bset if not w >> v & 1 and mu[v] & w)
                        y_floor[w] = max(y_floor[w], int(data.nu_max[w]) - Y[w] + alpha)
                        x_cap[w] = min(x_cap[w], int(data.n_min[w]) + X[w] - beta)
                key = (tuple(y_floor), tuple(x_cap))
                if key not in ilp_cache:
                    ilp_cache[key] = solve_feasibility(build_maxmin_model(instance, data, y_floor, x_cap))
                sol = ilp_cache[key]
                if sol is None:
                    continue
                ctx = GuessContext(mu, blocks_t, choice)
                return _nonempty_reconstruct(instance, sol, ctx, h, witness)
    return None


def _nonempty_reconstruct(instance, sol, ctx: GuessContext, h: dict[int, int], witness) -> Matching:
    # pin each witness vertex to its block vertex, then fill windows by flow
    adj = list(instance.left_adj)
    for i, block in enumerate(ctx.blocks):
        pairs = witness(h[i], block, ctx.mu)
        for v, u in pairs.items():
            adj[u] = (v,)
    return _maxmin_reconstruct(instance, sol, adj_override=adj, who="solve_maxmin_k_nonempty")


# ---------------------------------------------------------------------------
# MoV with guessed top colors


@dataclass(frozen=True)
class TargetSpec:
    """Guessed most frequent (``mu1``) and second most frequent (``mu2``) color per ``v``."""

    mu1: tuple[int, ...]
    mu2: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu1", tuple(int(c) for c in self.mu1))
        object.__setattr__(self, "mu2", tuple(int(c) for c in self.mu2))
        if len(self.mu1) != len(self.mu2):
            raise InputError("mu1 and mu2 differ in length")
        for v, (a, b) in enumerate(zip(self.mu1, self.mu2)):
            if a == b:
                raise InputError(f"mu1 and mu2 coincide at right vertex {v}")


def build_targeted_model(instance: Instance, targets: TargetSpec, nonempty: bool, tables=None) -> tuple[IlpModel, list[int]]:
    k, n = instance.k, instance.n
    nu, nn = tables if tables is not None else neighborhood_tables(instance)
    c12 = sorted(set(targets.mu1) | set(targets.mu2))
    rest = [c for c in range(instance.num_colors) if c not in c12]
    cnt = instance.color_counts
    m = IlpModel("targeted_mov")
    for v in range(k):
        m.add_var(("y", v), 0, n)
        for c in c12:
            m.add_var(("z", v, c), 0, cnt[c])
    for w in range(1, 1 << k):
        vs = _members(w, k)
        for c in c12:
            terms = {("z", v, c): 1 for v in vs}
            m.ge(terms, int(nu[c, w]))
            m.le(terms, int(nn[c, w]))
        if rest:
            m.ge({("y", v): 1 for v in vs}, int(nu[rest, w].max()))
    for v in range(k):
        a, b = targets.mu1[v], targets.mu2[v]
        for c in c12:
            if c != a:
                m.ge({("y", v): 1, ("z", v, c): -1}, 0)
        m.eq({("y", v): 1, ("z", v, b): -1}, 0)
        m.ge({("z", v, a): 1, ("z", v, b): -1}, 0)
        m.le({("z", v, a): 1, ("z", v, b): -1}, instance.ell)
        if nonempty:
            m.ge({("z", v, a): 1}, 1)
    return m, c12


def solve_targeted_mov(instance: Instance, targets: TargetSpec, nonempty: bool = False, tables=None) -> Matching | None:
    """MoV solver for fixed top-two colors per right vertex."""
    if instance.measure is not Measure.MOV:
        raise InputError("solve_targeted_mov needs the MoV measure")
    if len(targets.mu1) != instance.k:
        raise InputError("targets must name colors for every right vertex")
    for c in targets.mu1 + targets.mu2:
        if not 0 <= c < instance.num_colors:
            raise InputError(f"target color {c} is not a color of the instance")
    if _has_isolated(instance):
        return None
    model, c12 = build_targeted_model(instance, targets, nonempty, tables)
    sol = solve_feasibility(model)
    if sol is None:
        return None
    k = instance.k
    caps = [sol[("y", v)] for v in range(k)]
    parts = []
    for c in range(instance.num_colors):
        if c in c12:
            part = construct_exact(instance, c, [sol[("z", v, c)] for v in range(k)])
        else:
            part = construct_capped(instance, c, caps)
        if part is None:
            raise InternalError(f"targeted model certified color {c} but no matching exists")
        parts.append(part)
    matching = _assemble(instance, parts)
    check = instance.replace(size_min=1) if nonempty else instance
    return _checked(check, matching, "solve_targeted_mov")


def token_partitions(k: int) -> list[list[list[int]]]:
    """Partitions of tokens ``2v`` (rank 1) and ``2v+1`` (rank 2) keeping each pair apart."""
    out = []
    for part in set_partitions(range(2 * k)):
        if all(not (t % 2 == 0 and t + 1 in b) for b in part for t in b):
            out.append(part)
    return out


def default_rounds(k: int, cap: int = DEFAULT_ROUNDS_CAP) -> int:
    return min((2 * k + 1) ** (2 * k + 1), cap)


def solve_mov_k(
    instance: Instance,
    rounds: int | None = None,
    seed: int | None = None,
    rounds_cap: int = DEFAULT_ROUNDS_CAP,
    k_cap: int = MOV_K_CAP,
) -> Matching | None:
    """Randomized MoV solver (one-sided error).

    A returned matching is verified.  ``None`` means no matching was found
    within the rounds, not that none exists.
    """
    if instance.measure is not Measure.MOV:
        raise InputError("solve_mov_k needs the MoV measure")
    if not instance.at_most_nonempty:
        raise InputError("solve_mov_k supports at most the non-emptiness constraint")
    if instance.k > k_cap:
        raise ResourceError(f"k = {instance.k} exceeds the configured cap {k_cap}")
    if _has_isolated(instance):
        return None
    nonempty = instance.size_min == 1
    if nonempty and any(not a for a in instance.right_adj):
        return None
    inst = _with_phantom_color(instance)
    k, C = inst.k, inst.num_colors
    R = default_rounds(k, rounds_cap) if rounds is None else int(rounds)
    rng = np.random.default_rng(seed)
    tables = neighborhood_tables(inst)

    ncount = np.zeros((C, k), dtype=np.int64)  # |N_c(v)|
    for v in range(k):
        for u in inst.right_adj[v]:
            ncount[inst.left_colors[u], v] += 1

    tried: set[tuple] = set()
    tok_v = np.repeat(np.arange(k), 2)
    for part in token_partitions(k):
        nb = len(part)
        block_of = np.empty(2 * k, dtype=np.int64)
        for j, b in enumerate(part):
            block_of[b] = j
        # ell = 0 also lets a color be mapped to no block at all (value nb)
        lam = rng.integers(0, nb + (1 if inst.ell == 0 else 0), size=(R, C))
        # score[r, t, c] = |N_c(v_t)| if lam(c) is t's block, else -1
        hit = lam[:, None, :] == block_of[None, :, None]
        score = np.where(hit, ncount.T[tok_v][None, :, :], -1)
        best = score.argmax(axis=2)
        valid = np.take_along_axis(score, best[..., None], axis=2)[..., 0].min(axis=1) >= 0
        for b in part:
            if len(b) > 1:
                valid &= (best[:, b] == best[:, b[:1]]).all(axis=1)
        rows = best[valid]
        if not len(rows):
            continue
        # distinct targets in order of first appearance
        codes = rows @ (C ** np.arange(2 * k, dtype=np.int64))
        _, first = np.unique(codes, return_index=True)
        for r in np.sort(first):
            key = tuple(int(x) for x in rows[r])
            if key in tried:
                continue
            tried.add(key)
            targets = TargetSpec(key[0::2], key[1::2])
            got = solve_targeted_mov(inst, targets, nonempty, tables)
            if got is not None:
                return _checked(instance, got, "solve_mov_k")
    return None
