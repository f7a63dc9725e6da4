"""Few right vertices, many left vertices: the parameterized solvers.

Brute force over 2000 left vertices with three choices each is out of
the question, yet the Max-Min solver parameterized by ``k`` answers in
well under a second.  For MoV the randomized color-coding driver is
one-sided: a YES comes with a verified matching, a miss is reported as
"not found" rather than NO.
"""

import time

import numpy as np

from fairmatch import Instance, verify
from fairmatch.fpt import solve_kc, solve_maxmin_k, solve_mov_k
from fairmatch.gen import planted_instance
from fairmatch.oracle import brute_force, search_space

# 2000 left vertices, 40 of each of 50 colors, random neighborhoods
rng = np.random.default_rng(7)
adj = rng.random((2000, 3)) < 0.6
adj[np.arange(2000), rng.integers(0, 3, size=2000)] = True
big = Instance(50, tuple(u % 50 for u in range(2000)), 3,
               [(int(u), int(v)) for u, v in zip(*np.nonzero(adj))], 2, "maxmin")
print(f"n = {big.n}, k = {big.k}, colors = {big.num_colors}, assignments: a {len(str(search_space(big)))}-digit number")
start = time.perf_counter()
got = solve_maxmin_k(big)
print(f"solve_maxmin_k: {'YES' if got else 'NO'} in {time.perf_counter() - start:.2f} s")
if got is not None:
    print("witness verifies:", verify(big, got).valid)
    print("group sizes per right vertex:", [len(g) for g in got.groups(big.k)])

small = planted_instance(3, 4, 1, "mov", seed=11, group_size=(2, 5), extra_edge_prob=0.3)
print(f"\nplanted MoV instance: n = {small.n}, k = {small.k}")
print("brute force :", "YES" if brute_force(small) else "NO")
print("k + |C| ILP :", "YES" if solve_kc(small) else "NO")
hits = sum(solve_mov_k(small, seed=s) is not None for s in range(10))
print(f"color coding: found a matching in {hits}/10 seeded runs")
