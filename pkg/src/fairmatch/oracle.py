"""Exact reference solvers.

``brute_force`` enumerates every left-perfect assignment (vectorized in
chunks).  ``subset_dp`` decides the problem by a dynamic program over
subsets of ``U``.  ``backtrack`` is an exact depth-first search with
count-based pruning for instances too large to enumerate; it is validated
against ``brute_force`` in the test suite.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InternalError, ResourceError
from .model import Instance, Matching, Measure, verify

DEFAULT_BUDGET = 10**7
DP_MAX_N = 20
_CHUNK = 1 << 15


def _fair_rows(instance: Instance, counts: np.ndarray) -> np.ndarray:
    """Fairness and size test along the last axis of a count array."""
    srt = np.sort(counts, axis=-1)
    top = srt[..., -1]
    if instance.measure is Measure.MAXMIN:
        value = top - srt[..., 0]
    else:
        second = srt[..., -2] if instance.num_colors >= 2 else 0
        value = top - second
    size = counts.sum(axis=-1)
    ok = (value <= instance.ell) & (size >= instance.size_min)
    if instance.size_max is not None:
        ok &= size <= instance.size_max
    return ok


def search_space(instance: Instance) -> int:
    return math.prod(len(a) for a in instance.left_adj)


def brute_force(instance: Instance, budget: int = DEFAULT_BUDGET) -> Matching | None:
    """First fair assignment in mixed-radix order (left vertex 0 varies fastest)."""
    degrees = [len(a) for a in instance.left_adj]
    if 0 in degrees:
        return None
    total = math.prod(degrees)
    if total > budget:
        raise ResourceError(f"search space {total} exceeds budget {budget}")
    n, k, C = instance.n, instance.k, instance.num_colors
    nbr = [np.asarray(a, dtype=np.int64) for a in instance.left_adj]
    colors = instance.left_colors
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        rows = np.arange(len(idx))
        counts = np.zeros((len(idx), k * C), dtype=np.int64)
        assign = np.empty((len(idx), n), dtype=np.int64)
        rest = idx.copy()
        for u in range(n):
            digit = rest % degrees[u]
            rest //= degrees[u]
            v = nbr[u][digit]
            assign[:, u] = v
            counts[rows, v * C + colors[u]] += 1
        ok = _fair_rows(instance, counts.reshape(len(idx), k, C)).all(axis=1)
        hits = np.nonzero(ok)[0]
        if len(hits):
            return Matching(tuple(int(x) for x in assign[hits[0]]))
    return None


# ---------------------------------------------------------------------------
# subset dynamic program


def _submasks(mask: int) -> np.ndarray:
    bits = [b for b in range(mask.bit_length()) if mask >> b & 1]
    i = np.arange(1 << len(bits), dtype=np.int64)
    out = np.zeros_like(i)
    for t, b in enumerate(bits):
        out |= ((i >> t) & 1) << b
    return out


def admissible_subsets(instance: Instance, v: int) -> np.ndarray:
    """Bitmasks over ``U`` of every fair, size-feasible subset of ``N(v)``."""
    nmask = sum(1 << u for u in instance.right_adj[v])
    subs = _submasks(nmask)
    counts = np.zeros((len(subs), instance.num_colors), dtype=np.int64)
    for c, members in enumerate(instance.color_classes):
        cmask = sum(1 << u for u in members)
        counts[:, c] = np.bitwise_count(subs & cmask)
    return subs[_fair_rows(instance, counts)]


def subset_dp(instance: Instance) -> bool:
    """Whether the left side can be split into admissible sets, one per right vertex."""
    n = instance.n
    if n > DP_MAX_N:
        raise ResourceError(f"subset DP limited to n <= {DP_MAX_N}")
    if any(not a for a in instance.left_adj):
        return False
    reach = np.zeros(1 << n, dtype=bool)
    reach[0] = True
    for v in range(instance.k):
        cur = np.nonzero(reach)[0]
        nxt = np.zeros_like(reach)
        for block in admissible_subsets(instance, v):
            sel = cur[(cur & block) == 0]
            nxt[sel | block] = True
        reach = nxt
        if not reach.any():
            return False
    return bool(reach[(1 << n) - 1])


def subset_dp_matching(instance: Instance) -> Matching | None:
    """Same dynamic program, keeping every layer to read off a witness."""
    n, k = instance.n, instance.k
    if n > DP_MAX_N:
        raise ResourceError(f"subset DP limited to n <= {DP_MAX_N}")
    if any(not a for a in instance.left_adj):
        return None
    blocks = [admissible_subsets(instance, v) for v in range(k)]
    layers = [np.zeros(1 << n, dtype=bool)]
    layers[0][0] = True
    for v in range(k):
        cur = np.nonzero(layers[-1])[0]
        nxt = np.zeros(1 << n, dtype=bool)
        for block in blocks[v]:
            sel = cur[(cur & block) == 0]
            nxt[sel | block] = True
        layers.append(nxt)
    mask = (1 << n) - 1
    if not layers[k][mask]:
        return None
    assign = [-1] * n
    for v in range(k - 1, -1, -1):
        fits = blocks[v][(blocks[v] & mask) == blocks[v]]
        block = int(next(b for b in fits if layers[v][mask ^ int(b)]))
        for u in range(n):
            if block >> u & 1:
                assign[u] = v
        mask ^= block
    matching = Matching(tuple(assign))
    if not verify(instance, matching).valid:
        raise InternalError("subset DP produced an invalid matching")  # pragma: no cover
    return matching


# ---------------------------------------------------------------------------
# exact backtracking


class _Backtracker:
    def __init__(self, instance: Instance, node_limit: int):
        self.inst = instance
        self.node_limit = node_limit
        self.nodes = 0
        k, C = instance.k, instance.num_colors
        self.assigned = [[0] * C for _ in range(k)]
        self.pending = [[0] * C for _ in range(k)]
        for u, nbrs in enumerate(instance.left_adj):
            for v in nbrs:
                self.pending[v][instance.left_colors[u]] += 1
        self.assign = [-1] * instance.n
        self.q = instance.size_max if instance.size_max is not None else instance.n

    def feasible(self, v: int) -> bool:
        a, p = self.assigned[v], self.pending[v]
        inst = self.inst
        lo_size = sum(a)
        if lo_size > self.q or lo_size + sum(p) < inst.size_min:
            return False
        if inst.measure is Measure.MAXMIN:
            return max(a) - min(x + y for x, y in zip(a, p)) <= inst.ell
        if len(a) == 1:
            return a[0] <= inst.ell
        # MoV: a color already ahead of every possible rival by more than ell
        reach = [x + y for x, y in zip(a, p)]
        best = sorted(range(len(a)), key=lambda c: -reach[c])
        for c in range(len(a)):
            rival = reach[best[0]] if best[0] != c else reach[best[1]]
            if a[c] - rival > inst.ell:
                return False
        return True

    def _move(self, u: int, v: int, sign: int) -> None:
        c = self.inst.left_colors[u]
        for w in self.inst.left_adj[u]:
            self.pending[w][c] -= sign
        self.assigned[v][c] += sign

    def options(self, u: int) -> list[int]:
        out = []
        for v in self.inst.left_adj[u]:
            self._move(u, v, 1)
            if all(self.feasible(w) for w in self.inst.left_adj[u]):
                out.append(v)
            self._move(u, v, -1)
        return out

    def run(self) -> bool:
        if not all(self.feasible(v) for v in range(self.inst.k)):
            return False
        return self._go(self.inst.n)

    def _go(self, remaining: int) -> bool:
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise ResourceError(f"backtracking exceeded {self.node_limit} nodes")
        if remaining == 0:
            return True
        # most constrained left vertex first
        best_u, best_opts = -1, None
        for u in range(self.inst.n):
            if self.assign[u] != -1:
                continue
            opts = self.options(u)
            if best_opts is None or len(opts) < len(best_opts):
                best_u, best_opts = u, opts
                if len(opts) <= 1:
                    break
        if not best_opts:
            return False
        for v in best_opts:
            self._move(best_u, v, 1)
            self.assign[best_u] = v
            if self._go(remaining - 1):
                return True
            self.assign[best_u] = -1
            self._move(best_u, v, -1)
        return False


def backtrack(instance: Instance, node_limit: int = 5_000_000) -> Matching | None:
    """Exact search with per-vertex count bounds; raises on node budget."""
    if any(not a for a in instance.left_adj):
        return None
    bt = _Backtracker(instance, node_limit)
    if not bt.run():
        return None
    matching = Matching(tuple(bt.assign))
    if not verify(instance, matching).valid:
        raise InternalError("backtracking produced an invalid matching")  # pragma: no cover
    return matching


def solve_oracle(instance: Instance, budget: int = DEFAULT_BUDGET) -> Matching | None:
    """Brute force when the search space fits the budget, otherwise backtracking."""
    if search_space(instance) <= budget:
        return brute_force(instance, budget)
    return backtrack(instance)
