"""Where no shortcut applies: instances built from hard source problems.

Tiny 3-dimensional matching and SAT inputs are turned into matching
instances with bounded degrees.  The exact backtracking oracle then
confirms that the matching instance has the same answer as the source.
"""

from fairmatch.gen import (
    has_perfect_3dm, is_satisfiable, random_3dm, random_sat4occ, reduce_3dm_maxmin24,
    reduce_3dm_maxmin33, reduce_sat_mov25,
)
from fairmatch.cli import route
from fairmatch.oracle import backtrack

for seed in range(4):
    t = random_3dm(3, 5, seed=seed)
    a, b = reduce_3dm_maxmin33(t), reduce_3dm_maxmin24(t)
    print(f"3DM seed {seed}: perfect matching {has_perfect_3dm(t)!s:5}"
          f" | degree 3/3 instance n={a.n:3} -> {backtrack(a) is not None!s:5}"
          f" | degree 2/4 instance n={b.n:3} -> {backtrack(b) is not None!s:5} (router: {route(b).solver})")

cnf = random_sat4occ(6, seed=3)
inst = reduce_sat_mov25(cnf)
print(f"\nSAT with 6 variables: satisfiable {is_satisfiable(cnf)}; "
      f"MoV instance n={inst.n}, degrees {inst.max_left_degree}/{inst.max_right_degree} "
      f"-> {backtrack(inst) is not None}")
