import itertools

import numpy as np
import pytest

from fairmatch.errors import InputError
from fairmatch.model import Instance, mov
from fairmatch.poly import (
    ADMISSIBLE, GADGETS, GeneralFactorInstance, boundary_patterns, gadget_for,
    gadget_multiplicities, kappa_partition, representable, solve_complete,
    solve_complete_maxmin, solve_complete_mov, solve_direct, solve_general_factor_exact,
    solve_maxmin_lowdeg, solve_mov_deg4, solve_two_colors,
)

from _util import assert_agrees, complete, random_small

# ---------------------------------------------------------------------------
# General Factor


def test_general_factor_examples():
    assert solve_general_factor_exact(GeneralFactorInstance(1, (), ({0},))) == frozenset()
    assert solve_general_factor_exact(GeneralFactorInstance(2, ((0, 1),), ({1}, {1}))) == {0}
    tri = GeneralFactorInstance(3, ((0, 1), (1, 2), (0, 2)), ({1}, {1}, {1}))
    assert solve_general_factor_exact(tri) is None


def test_general_factor_rejects_bad_lists():
    with pytest.raises(InputError):
        GeneralFactorInstance(2, ((0, 1),), ({2}, {1}))


# ---------------------------------------------------------------------------
# two colors


def test_two_color_table_rows():
    assert gadget_multiplicities(7, 0, 5) == (7, 0, 0, 0, 3, 0)
    assert gadget_multiplicities(4, 0, 0) == (4, 0, 0, 0, 0, 0)


def test_boundary_patterns_match_stated_sets():
    for i in GADGETS:
        assert boundary_patterns(i) == ADMISSIBLE[i], i


def test_gadget_bank_representation_small():
    for p in range(4):
        for ell in range(4):
            for m1 in range(7):
                for m2 in range(7 - m1):
                    want = m1 + m2 >= p and abs(m1 - m2) <= ell
                    assert representable(m1, m2, p, ell) == want


def test_two_color_examples():
    assert solve_two_colors(complete((1, 1), 1, 0)) is not None
    assert solve_two_colors(complete((3, 1), 1, 1)) is None
    with pytest.raises(InputError):
        solve_two_colors(complete((1, 1, 1), 1, 0))


def test_two_colors_against_oracle():
    rng = np.random.default_rng(51)
    for _ in range(250):
        inst = random_small(rng, n_max=8, c_max=1, ell_max=3, size_min=int(rng.integers(0, 4)))
        inst = inst.replace(num_colors=2, left_colors=tuple(int(x) for x in rng.integers(0, 2, inst.n)))
        assert_agrees(inst, solve_two_colors(inst))


# ---------------------------------------------------------------------------
# MoV, right degree at most four


def _gadget_accepts(g, counts, chosen):
    """Whether the gadget absorbs exactly the chosen number of vertices per class."""
    lists, edges = [frozenset(l) for l in g.lists], list(g.edges)
    attached = []
    for j, c in enumerate(counts):
        for i in range(c):
            attached.append((j, i < chosen[j]))
    n = len(attached)
    all_lists = [frozenset({1 if take else 0}) for _, take in attached] + lists
    all_edges = [(n + a, n + b) for a, b in edges] + [(u, n + g.groups[j]) for u, (j, _) in enumerate(attached)]
    # clip lists to degrees so the instance is well formed
    deg = [0] * len(all_lists)
    for a, b in all_edges:
        deg[a] += 1
        deg[b] += 1
    all_lists = [frozenset(x for x in l if x <= deg[w]) for w, l in enumerate(all_lists)]
    if any(not l for l in all_lists):
        return False
    gf = GeneralFactorInstance(len(all_lists), tuple(all_edges), tuple(all_lists))
    return solve_general_factor_exact(gf) is not None


PROFILES = [c for d in range(1, 5) for c in itertools.product(range(5), repeat=4)
            if sum(c) == d and list(c) == sorted(c, reverse=True)]


@pytest.mark.parametrize("nonempty", [False, True])
@pytest.mark.parametrize("ell", [0, 1, 2, 3])
def test_every_gadget_accepts_exactly_the_fair_subsets(ell, nonempty):
    for counts in PROFILES:
        counts = tuple(c for c in counts if c)
        g = gadget_for(counts, ell, nonempty)
        for chosen in itertools.product(*(range(c + 1) for c in counts)):
            fair = mov(chosen) <= ell and (sum(chosen) >= 1 or not nonempty)
            assert _gadget_accepts(g, counts, chosen) == fair, (counts, ell, nonempty, chosen)


def test_deg4_example_gadgets():
    g = gadget_for((2, 1, 1), 0, False)
    assert sorted(map(sorted, g.lists)) == [[0, 1, 3], [1], [1], [1]]
    g = gadget_for((2, 2), 1, False)
    assert list(g.lists) == [frozenset({1, 2})] * 2 and g.edges == ((0, 1),)


def test_mov_deg4_against_oracle():
    rng = np.random.default_rng(61)
    for _ in range(250):
        inst = random_small(rng, n_max=8, measure="mov", max_right_degree=4, size_min=int(rng.integers(0, 2)))
        assert_agrees(inst, solve_mov_deg4(inst))


# ---------------------------------------------------------------------------
# Max-Min, small degrees


def test_lowdeg_deg2_ell2():
    inst = Instance(3, (0, 1, 2, 0), 2, [(0, 0), (1, 0), (2, 1), (3, 1)], 2, "maxmin")
    assert solve_maxmin_lowdeg(inst) is not None


def test_lowdeg_odd_conflict_cycle():
    # left vertices are the edges of K4, colored by a 1-factorization, so
    # every right vertex is rainbow of degree 3 and the conflict graph is K4
    pairs = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]
    colors = (0, 0, 1, 1, 2, 2)
    edges = [(u, v) for u, pair in enumerate(pairs) for v in pair]
    inst = Instance(3, colors, 4, edges, 0, "maxmin")
    assert inst.max_left_degree == 2 and inst.max_right_degree == 3
    assert solve_maxmin_lowdeg(inst) is None
    assert_agrees(inst, None)


def test_lowdeg_even_conflict_cycle():
    # same idea on a 4-cycle of right vertices: bipartite, hence YES
    pairs = [(0, 1), (1, 2), (2, 3), (3, 0)]
    colors = (0, 1, 0, 1)
    edges = [(u, v) for u, pair in enumerate(pairs) for v in pair]
    inst = Instance(2, colors, 4, edges, 0, "maxmin")
    assert_agrees(inst, solve_maxmin_lowdeg(inst))


def test_lowdeg_rejects_wrong_measure():
    with pytest.raises(InputError):
        solve_maxmin_lowdeg(complete((1, 1), 1, 0, "mov"))


@pytest.mark.parametrize("shape", [(None, 2), (2, 3)])
def test_lowdeg_against_oracle(shape):
    rng = np.random.default_rng(71 + shape[1])
    for _ in range(250):
        inst = random_small(rng, n_max=9, k_max=4, measure="maxmin", max_left_degree=shape[0],
                            max_right_degree=shape[1], size_min=int(rng.integers(0, 2)), ell_max=3)
        assert_agrees(inst, solve_maxmin_lowdeg(inst))


# ---------------------------------------------------------------------------
# complete bipartite and direct


def test_complete_examples():
    assert solve_complete_mov((4, 3, 1), 2, 0) is not None
    assert solve_complete_mov((5, 3, 1), 2, 0) is None
    assert solve_complete_mov((1, 1), 3, 1, nonempty=True) is None
    assert solve_complete_maxmin((4, 1), 3, 1) is not None
    assert solve_complete_maxmin((4, 1), 1, 2) is None
    assert solve_complete_maxmin((3, 3, 3), 3, 0, nonempty=True) is not None


def test_kappa_partition():
    for alpha in range(1, 7):
        for kappa in range(1, 3 * alpha // 2 + 1):
            parts = kappa_partition(alpha, kappa)
            assert len(parts) == kappa
            flat = sorted(x for p in parts for x in p)
            assert flat == sorted((s, j) for s in range(3) for j in range(alpha))
            for p in parts:
                slots = [s for s, _ in p]
                assert p and mov([slots.count(s) for s in range(3)]) == 0


def test_solve_complete_needs_complete_graph():
    with pytest.raises(InputError):
        solve_complete(Instance(1, (0, 0), 2, [(0, 0), (1, 1)], 0, "mov"))


def test_direct():
    inst = Instance(2, (0, 1, 0), 2, [(0, 0), (1, 0), (2, 1)], 1, "maxmin")
    assert_agrees(inst, solve_direct(inst))
    rng = np.random.default_rng(81)
    for _ in range(100):
        inst = random_small(rng, max_left_degree=1, size_min=int(rng.integers(0, 2)))
        assert_agrees(inst, solve_direct(inst))
