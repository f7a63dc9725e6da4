"""Complete bipartite graphs: closed-form decisions and explicit witnesses.

When every left vertex may go anywhere, only the color counts matter.
The allocation routines below work on a *table* ``T[v][c]`` (how many
vertices of color ``c`` go to ``v``); :func:`realize` turns a table into a
matching of a concrete instance.

Colors are ranked by count, largest first, ties broken by color id.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import InputError, InternalError
from ..model import Instance, Matching, Measure, fairness, verify

Table = list[list[int]]


def rank_colors(counts: Sequence[int]) -> list[int]:
    """Color ids ordered by descending count, then by id."""
    return sorted(range(len(counts)), key=lambda c: (-counts[c], c))


def _check_args(counts: Sequence[int], k: int, ell: int) -> None:
    if k < 1 or ell < 0 or not counts or any(m < 0 for m in counts):
        raise InputError("need k >= 1, ell >= 0 and nonnegative counts")


# ---------------------------------------------------------------------------
# MoV


def mov_condition(counts: Sequence[int], k: int, ell: int, nonempty: bool = False) -> bool:
    """Closed-form decision for MoV on a complete bipartite graph."""
    _check_args(counts, k, ell)
    s = sorted(counts, reverse=True) + [0] * (k + 1)
    ok = s[0] <= ell * k + sum(s[1 : k + 1])
    if nonempty:
        n = sum(counts)
        ok = ok and (n >= k if ell > 0 else n >= 2 * k)
    return ok


def _algorithm_one(counts: Sequence[int], k: int, ell: int) -> tuple[Table, list[int]]:
    """Pair the top color against the next colors one right vertex at a time.

    Returns the table and the ranking used (padded rank positions beyond
    the number of colors are simply never touched).
    """
    order = rank_colors(counts)
    C = len(counts)
    rest = list(counts)
    table = [[0] * C for _ in range(k)]
    top = order[0]
    i = 0  # right vertex, paired with rank position i + 1
    while i < k and i + 1 < C and rest[top] > 0 and rest[top] >= rest[order[i + 1]] + ell:
        partner = order[i + 1]
        table[i][top] += rest[partner] + ell
        rest[top] -= rest[partner] + ell
        table[i][partner] += rest[partner]
        rest[partner] = 0
        i += 1
    # no partner colors left: the top color alone, ell per right vertex
    while i < k and rest[top] >= ell and rest[top] > 0 and i + 1 >= C:
        table[i][top] += ell
        rest[top] -= ell
        i += 1
    if rest[top] > 0:
        if i >= k:
            raise InternalError("Algorithm 1 ran out of right vertices")
        take = min(rest[order[i + 1]], rest[top]) if i + 1 < C else 0
        if i + 1 < C:
            table[i][order[i + 1]] += take
            rest[order[i + 1]] -= take
        table[i][top] += rest[top]
        rest[top] = 0
    for c in range(C):
        table[0][c] += rest[c]
    return table, order


def _move(table: Table, src: int, dst: int, colors: Sequence[int]) -> None:
    for c in colors:
        if table[src][c] <= 0:
            raise InternalError("moving a vertex that is not there")
        table[src][c] -= 1
        table[dst][c] += 1


def kappa_partition(alpha: int, kappa: int) -> list[list[tuple[int, int]]]:
    """Split three colors with ``alpha`` vertices each into ``kappa`` 0-fair parts.

    Vertices are ``(slot, j)`` with slot in 0..2 and j in 0..alpha-1.
    Requires ``1 <= kappa <= floor(3 * alpha / 2)``.
    """
    if not 1 <= kappa <= (3 * alpha) // 2:
        raise InputError(f"no partition of 3*{alpha} vertices into {kappa} parts")
    if kappa <= alpha:
        parts = [[(0, j), (1, j), (2, j)] for j in range(kappa - 1)]
        parts.append([(s, j) for j in range(kappa - 1, alpha) for s in range(3)])
        return parts
    if alpha == 2:
        return [[(0, 0), (1, 1)], [(1, 0), (2, 1)], [(2, 0), (0, 1)]]
    if alpha % 2:
        return kappa_partition(alpha - 1, kappa - 1) + [[(0, alpha - 1), (1, alpha - 1), (2, alpha - 1)]]
    a, b = alpha - 2, alpha - 1
    return kappa_partition(alpha - 2, kappa - 3) + [[(0, a), (1, b)], [(1, a), (2, b)], [(2, a), (0, b)]]


def _fill_nonempty_mov(table: Table, order: list[int], ell: int) -> None:
    """Reassign vertices so that no right vertex stays empty (in place)."""
    k = len(table)
    empty = [v for v in range(k) if not any(table[v])]
    if not empty:
        return
    if ell > 0:
        for dst in empty:
            src = next(v for v in range(k) if sum(table[v]) >= 2)
            c = rank_colors(table[src])[0]
            _move(table, src, dst, [c])
        return
    top, second = order[0], order[1]

    def take(src, colors):
        _move(table, src, empty.pop(0), colors)

    # step 1: trim paired right vertices down to one pair each
    for v in range(1, k):
        while empty and sum(table[v]) > 2:
            pair = [c for c in range(len(table[v])) if table[v][c]]
            take(v, pair)
    # step 2: peel pairs of minor colors off the first right vertex
    while empty:
        minor = [c for c in rank_colors(table[0]) if c not in (top, second) and table[0][c]]
        if len(minor) < 2:
            break
        take(0, minor[-2:])
    # step 3: level the two leading colors with the third one
    while empty:
        present = [c for c in range(len(table[0])) if table[0][c]]
        if len(present) != 3:
            break
        third = next(c for c in present if c not in (top, second))
        if not table[0][top] == table[0][second] > table[0][third]:
            break
        take(0, [top, second])
    if not empty:
        return
    present = [c for c in range(len(table[0])) if table[0][c]]
    if len(present) <= 2:
        while empty:
            if sum(table[0]) <= 2:
                raise InternalError("not enough vertices to fill every right vertex")
            take(0, [top, second])
        return
    # three colors, alpha each: split the first right vertex into kappa parts
    alpha = table[0][present[0]]
    parts = kappa_partition(alpha, len(empty) + 1)
    row = [0] * len(table[0])
    table[0] = row
    for dst, part in zip([0] + empty, parts):
        for slot, _ in part:
            table[dst][present[slot]] += 1
    empty.clear()


def allocate_complete_mov(counts: Sequence[int], k: int, ell: int, nonempty: bool = False) -> Table | None:
    """Per-vertex color counts of a fair MoV allocation, or ``None``."""
    if not mov_condition(counts, k, ell, nonempty):
        return None
    table, order = _algorithm_one(counts, k, ell)
    if nonempty:
        _fill_nonempty_mov(table, order, ell)
    return table


# ---------------------------------------------------------------------------
# Max-Min


def maxmin_condition(counts: Sequence[int], k: int, ell: int, nonempty: bool = False) -> bool:
    _check_args(counts, k, ell)
    ok = max(counts) <= ell * k + min(counts)
    if nonempty:
        ok = ok and (sum(counts) >= k if ell > 0 else max(counts) >= k)
    return ok


def allocate_complete_maxmin(counts: Sequence[int], k: int, ell: int, nonempty: bool = False) -> Table | None:
    """Round-robin allocation for Max-Min, or ``None``."""
    if not maxmin_condition(counts, k, ell, nonempty):
        return None
    C = len(counts)
    table = [[0] * C for _ in range(k)]
    order = rank_colors(counts)
    if nonempty and counts[order[0]] < k:
        # every color fits in one lap: continue the lap across colors
        i = 0
        for c in order:
            for _ in range(counts[c]):
                table[i % k][c] += 1
                i += 1
        return table
    for c in order:
        for j in range(counts[c]):
            table[j % k][c] += 1
    return table


# ---------------------------------------------------------------------------
# instance level


def _table_fair(table: Table, measure: Measure, ell: int, nonempty: bool) -> bool:
    return all(fairness(measure, row) <= ell and (sum(row) >= 1 or not nonempty) for row in table)


def realize(instance: Instance, table: Table) -> Matching:
    """Matching of a complete instance that follows an allocation table."""
    pools = [list(members) for members in instance.color_classes]
    assign = [-1] * instance.n
    for v, row in enumerate(table):
        for c, m in enumerate(row):
            for _ in range(m):
                assign[pools[c].pop()] = v
    if any(pools):
        raise InternalError("allocation table does not use every vertex")
    return Matching(tuple(assign))


def _canonical(counts: Sequence[int], k: int, ell: int, measure: Measure, nonempty: bool) -> Instance:
    from ..gen import complete_instance

    return complete_instance(counts, k, ell, measure, int(nonempty))


def solve_complete_mov(counts: Sequence[int], k: int, ell: int, nonempty: bool = False) -> Matching | None:
    """Witness on the complete instance whose left side lists colors in id order."""
    table = allocate_complete_mov(counts, k, ell, nonempty)
    if table is None:
        return None
    return _checked(_canonical(counts, k, ell, Measure.MOV, nonempty), table)


def solve_complete_maxmin(counts: Sequence[int], k: int, ell: int, nonempty: bool = False) -> Matching | None:
    table = allocate_complete_maxmin(counts, k, ell, nonempty)
    if table is None:
        return None
    return _checked(_canonical(counts, k, ell, Measure.MAXMIN, nonempty), table)


def _checked(instance: Instance, table: Table) -> Matching:
    matching = realize(instance, table)
    verdict = verify(instance, matching)
    if not verdict.valid:
        raise InternalError(f"complete-graph witness failed: {verdict.violations[0]}")
    return matching


def solve_complete(instance: Instance) -> Matching | None:
    """Dispatch on the measure for a complete bipartite instance."""
    if not instance.is_complete:
        raise InputError("solve_complete needs a complete bipartite graph")
    if not instance.at_most_nonempty:
        raise InputError("solve_complete supports at most the non-emptiness constraint")
    counts = list(instance.color_counts)
    nonempty = instance.size_min >= 1
    alloc = allocate_complete_mov if instance.measure is Measure.MOV else allocate_complete_maxmin
    table = alloc(counts, instance.k, instance.ell, nonempty)
    if table is None:
        return None
    if not _table_fair(table, instance.measure, instance.ell, nonempty):
        raise InternalError("allocation table is not fair")
    return _checked(instance, table)
