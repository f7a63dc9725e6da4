"""Acceptance criteria.

Each test prints one ``criterion N: PASS|FAIL ...`` line (visible even
under output capture) and then asserts.  Every expected value comes from
an exact oracle, never from a hard-coded answer.
"""

import itertools
from collections import Counter
import time

import numpy as np
import pytest

from fairmatch.cli import APPLICABLE, run_solver
from fairmatch.errors import ResourceError
from fairmatch.fpt import solve_kc, solve_maxmin_k, solve_maxmin_k_nonempty, solve_mov_k
from fairmatch.gen import (
    ThreeDMInstance, complete_instance, has_perfect_3dm, is_satisfiable,
    random_3dm, random_instance, random_sat4occ, reduce_3dm_maxmin24,
    reduce_3dm_maxmin33, reduce_sat_mov25,
)
from fairmatch.matchflow import construct_exact
from fairmatch.model import Instance, Measure, verify
from fairmatch.oracle import backtrack, brute_force, subset_dp
from fairmatch.poly import (
    representable, solve_complete, solve_maxmin_lowdeg, solve_mov_deg4, solve_two_colors,
)
from fairmatch.setfn import (
    SetFunctionTable, check_supermodular, convolve_max, find_touching_separator, neighborhood_tables,
)

PER_CLASS = 500


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return emit


def _draw(rng, measure, size_min, **kw):
    n = int(rng.integers(1, 11))
    k = int(rng.integers(1, 4))
    colors = kw.pop("colors", None) or int(rng.integers(1, 5))
    ell = int(rng.integers(0, 3))
    return random_instance(
        n, k, colors, ell, measure, seed=int(rng.integers(1 << 31)),
        edge_prob=float(rng.uniform(0.25, 0.9)), min_left_degree=1, size_min=size_min, **kw,
    )


def _suite(cls, rng):
    """PER_CLASS instances for one applicability class, both toggles covered."""
    out = []
    while len(out) < PER_CLASS:
        i = len(out)
        nonempty = i % 2
        measure = "mov" if (i // 2) % 2 else "maxmin"
        if cls == "kc":
            inst = _draw(rng, measure, nonempty, size_max=None if i % 5 else int(rng.integers(2, 6)))
        elif cls == "maxmin-k":
            inst = _draw(rng, "maxmin", 0)
        elif cls == "maxmin-k-nonempty":
            inst = _draw(rng, "maxmin", 1)
        elif cls == "two-colors":
            inst = _draw(rng, measure, int(rng.integers(0, 4)), colors=2)
        elif cls == "mov-deg4":
            inst = _draw(rng, "mov", nonempty, max_right_degree=4)
        elif cls == "maxmin-lowdeg":
            shape = (None, 2) if i % 4 < 2 else (2, 3)
            inst = _draw(rng, "maxmin", nonempty, max_left_degree=shape[0], max_right_degree=shape[1])
        if APPLICABLE[cls](inst):
            out.append(inst)
    return out


SOLVERS = {
    "kc": solve_kc,
    "maxmin-k": solve_maxmin_k,
    "maxmin-k-nonempty": solve_maxmin_k_nonempty,
    "two-colors": solve_two_colors,
    "mov-deg4": solve_mov_deg4,
    "maxmin-lowdeg": solve_maxmin_lowdeg,
}


def test_criterion_1_oracle_agreement(report):
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    mismatches, counts = {}, {}
    for cls, solver in SOLVERS.items():
        bad = 0
        for inst in _suite(cls, rng):
            got = solver(inst)
            if (got is not None) != (brute_force(inst) is not None):
                bad += 1
        mismatches[cls], counts[cls] = bad, PER_CLASS
    elapsed = time.perf_counter() - start
    ok = not any(mismatches.values()) and elapsed < 600
    detail = ", ".join(f"{c} {mismatches[c]}/{counts[c]}" for c in SOLVERS) + f"; {elapsed:.1f} s"
    assert report(1, ok, f"mismatches {detail}")


def test_criterion_2_mov_k_one_sided(report):
    rng = np.random.default_rng(1002)
    false_yes = yes_total = yes_found = runs = 0
    for cls in ("kc", "mov-deg4", "two-colors"):
        for inst in _suite(cls, rng):
            if inst.measure is not Measure.MOV or not APPLICABLE["mov-k"](inst):
                continue
            truth = brute_force(inst) is not None
            got = solve_mov_k(inst, seed=runs)
            runs += 1
            if got is not None and (not truth or not verify(inst, got).valid):
                false_yes += 1
            if truth:
                yes_total += 1
                yes_found += got is not None
    rate = yes_found / max(yes_total, 1)
    ok = false_yes == 0 and yes_total >= 50 and rate >= 0.55
    assert report(2, ok, f"{runs} runs, false YES {false_yes}, success {yes_found}/{yes_total} = {rate:.3f}")


def test_criterion_3_witness_soundness(report):
    rng = np.random.default_rng(1003)
    checked = invalid = 0
    names = [n for n in APPLICABLE if n != "targeted-mov"]
    for i in range(300):
        inst = _draw(rng, "mov" if i % 2 else "maxmin", int(rng.integers(0, 3)),
                     size_max=None if i % 4 else int(rng.integers(2, 6)))
        if i % 7 == 0:
            inst = complete_instance(list(rng.integers(1, 4, size=3)), int(rng.integers(1, 4)),
                                     int(rng.integers(0, 3)), inst.measure, int(rng.integers(0, 2)))
        for name in names:
            if not APPLICABLE[name](inst):
                continue
            outcome = run_solver(name, inst)
            if outcome.matching is not None:
                checked += 1
                invalid += not verify(inst, outcome.matching).valid
    assert report(3, invalid == 0 and checked > 0, f"{checked} YES witnesses, {invalid} rejected by verify")


def _count_vectors(total, colors):
    if colors == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _count_vectors(total - first, colors - 1):
            yield (first, *rest)


def test_criterion_4_complete_exhaustive(report):
    cases = bad = 0
    for colors in range(1, 5):
        for n in range(1, 9):
            for counts in _count_vectors(n, colors):
                for k, ell, measure, nonempty in itertools.product(range(1, 4), range(3), Measure, (0, 1)):
                    inst = complete_instance(counts, k, ell, measure, nonempty)
                    got = solve_complete(inst)
                    truth = subset_dp(inst)
                    cases += 1
                    if (got is not None) != truth or (got is not None and not verify(inst, got).valid):
                        bad += 1
    assert report(4, bad == 0, f"{cases} cases, {bad} disagreements with the subset DP")


def _valid_triple(rng):
    """(f, f', g) with g a nu table of a random instance and f modular."""
    k = int(rng.integers(1, 5))
    inst = random_instance(int(rng.integers(1, 9)), k, 2, seed=int(rng.integers(1 << 31)),
                           edge_prob=float(rng.uniform(0.3, 0.8)), min_left_degree=1)
    nu, _ = neighborhood_tables(inst)
    c = int(rng.integers(0, 2))
    g = nu[c]
    deg_c = [sum(1 for u in inst.right_adj[v] if inst.left_colors[u] == c) for v in range(k)]
    x = [int(rng.integers(0, 4)) for _ in range(k)]
    hi = [max(a, b) + int(rng.integers(0, 3)) for a, b in zip(x, deg_c)]
    return SetFunctionTable.from_singletons(x), SetFunctionTable.from_singletons(hi), g


def test_criterion_5_set_functions(report):
    rng = np.random.default_rng(1005)
    super_ok = 0
    for _ in range(200):
        k = int(rng.integers(1, 6))
        inst = random_instance(int(rng.integers(1, 12)), k, 3, seed=int(rng.integers(1 << 31)),
                               edge_prob=float(rng.uniform(0.2, 0.8)))
        nu, _ = neighborhood_tables(inst)
        super_ok += all(check_supermodular(nu[c]) for c in range(3))
    sep_ok = 0
    for _ in range(200):
        f, fp, g = _valid_triple(rng)
        sep = find_touching_separator(f, fp, g)
        h = sep.table.array()
        full = len(h) - 1
        ok = (np.all(h >= np.maximum(f.array(), g)) and np.all(h <= fp.array())
              and h[full] == convolve_max(g, f)[full])
        sep_ok += bool(ok)
    ok = super_ok == 200 and sep_ok == 200
    assert report(5, ok, f"supermodular nu tables {super_ok}/200, separators {sep_ok}/200")


def test_criterion_6_representation(report):
    cases = bad = 0
    for p in range(7):
        for ell in range(7):
            for m1 in range(13):
                for m2 in range(13 - m1):
                    cases += 1
                    want = m1 + m2 >= p and abs(m1 - m2) <= ell
                    bad += representable(m1, m2, p, ell) != want
    assert report(6, bad == 0, f"{cases} cases, {bad} exceptions")


def _bounds_ok(inst, left, right):
    return inst.max_left_degree <= left and inst.max_right_degree <= right and inst.num_colors == 3


def test_criterion_7_reductions(report):
    rng = np.random.default_rng(1007)
    sources = []
    for q in (1, 2):
        universe = list(itertools.product(range(q), repeat=3))
        for r in range(5):
            for combo in itertools.combinations(universe, r):
                if all(max(Counter(t[i] for t in combo).values(), default=0) <= 3 for i in range(3)):
                    sources.append(ThreeDMInstance(q, q, q, combo))
    exhaustive = len(sources)
    for _ in range(100):
        q = int(rng.integers(1, 5))
        sources.append(random_3dm(q, int(rng.integers(0, min(3 * q, q**3) + 1)), seed=int(rng.integers(1 << 31))))
    bad33 = bad24 = bounds = 0
    yes = 0
    for t in sources:
        truth = has_perfect_3dm(t)
        yes += truth
        a, b = reduce_3dm_maxmin33(t), reduce_3dm_maxmin24(t)
        bounds += not _bounds_ok(a, 3, 3) + (not _bounds_ok(b, 2, 4))
        bad33 += (backtrack(a) is not None) != truth
        bad24 += (backtrack(b) is not None) != truth
    # the smallest profile-valid formulas have three variables; no
    # unsatisfiable formula with this occurrence profile is small enough
    # for the brute-force SAT check, so only satisfiable ones appear here
    cnfs = [random_sat4occ(3, seed=int(s)) for s in range(50)]
    cnfs += [random_sat4occ(6, seed=int(s)) for s in rng.integers(1 << 31, size=50)]
    bad_sat = sat = 0
    for cnf in cnfs:
        truth = is_satisfiable(cnf)
        sat += truth
        inst = reduce_sat_mov25(cnf)
        bounds += not (inst.max_left_degree <= 2 and inst.max_right_degree <= 5 and inst.num_colors == 3)
        bad_sat += (backtrack(inst) is not None) != truth
    ok = bad33 == bad24 == bad_sat == bounds == 0
    assert report(7, ok, (
        f"3DM {len(sources)} inputs ({exhaustive} exhaustive, {yes} YES): mismatches 33 {bad33}, 24 {bad24}; "
        f"SAT {len(cnfs)} formulas ({sat} satisfiable): mismatches {bad_sat}; degree-bound failures {bounds}"
    ))


def _big_maxmin(rng, yes):
    n, k, C = 2000, 3, 50
    colors = np.arange(n) % C
    rng.shuffle(colors)
    adj = rng.random((n, k)) < 0.5
    adj[np.arange(n), rng.integers(0, k, size=n)] = True
    if not yes:
        # all of color 0 forced onto v0, while color 1 avoids v0 entirely
        adj[colors == 0] = [True, False, False]
        adj[colors == 1, 0] = False
        adj[colors == 1, 1] = True
    edges = tuple((int(u), int(v)) for u, v in zip(*np.nonzero(adj)))
    return Instance(C, tuple(int(c) for c in colors), k, edges, 2 if yes else 0, Measure.MAXMIN)


def test_criterion_8_scaling(report):
    rng = np.random.default_rng(1008)
    notes, ok = [], True
    for yes in (True, False):
        inst = _big_maxmin(rng, yes)
        start = time.perf_counter()
        got = solve_maxmin_k(inst)
        elapsed = time.perf_counter() - start
        ok &= elapsed < 10 and (got is not None) == yes
        if got is not None:
            ok &= verify(inst, got).valid
        try:
            cross = solve_kc(inst)
            ok &= (cross is not None) == (got is not None)
            how = "kc agrees"
        except ResourceError:
            how = "kc over budget"
        notes.append(f"{'YES' if got is not None else 'NO'} in {elapsed:.2f} s, {how}")
    assert report(8, ok, "n=2000 |C|=50 k=3: " + "; ".join(notes))


def test_criterion_9_hall_constructive(report):
    rng = np.random.default_rng(1009)
    agree = yes = 0
    for _ in range(300):
        k = int(rng.integers(1, 5))
        n = int(rng.integers(1, 9))
        inst = random_instance(n, k, 1, seed=int(rng.integers(1 << 31)), edge_prob=float(rng.uniform(0.2, 0.8)))
        z = np.bincount(rng.integers(0, k, size=n), minlength=k).tolist()
        nu, nn = neighborhood_tables(inst)
        hall = all(
            nu[0, w] <= sum(z[v] for v in range(k) if w >> v & 1) <= nn[0, w] for w in range(1 << k)
        )
        got = construct_exact(inst, 0, z)
        if got is not None:
            ok = all(v in inst.left_adj[u] for u, v in got.items())
            ok &= [list(got.values()).count(v) for v in range(k)] == z
        else:
            ok = True
        agree += ok and (got is not None) == hall
        yes += hall
    assert report(9, agree == 300, f"{agree}/300 agree ({yes} satisfy the condition)")
