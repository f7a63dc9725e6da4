"""When everyone may go anywhere, only the color counts matter.

The closed-form tests decide the instance without search, and the
allocation routines build a witness.  We sweep a few count vectors and
cross-check every answer with the subset dynamic program.
"""

from fairmatch.gen import complete_instance
from fairmatch.oracle import subset_dp
from fairmatch.poly import allocate_complete_mov, maxmin_condition, mov_condition, solve_complete

cases = [((4, 3, 1), 2, 0), ((5, 3, 1), 2, 0), ((6, 2, 2, 1), 3, 1), ((4, 1), 3, 1), ((4, 1), 1, 2)]
print(f"{'counts':>14} k ell | MoV  Max-Min | DP agrees")
for counts, k, ell in cases:
    row = []
    for measure, cond in (("mov", mov_condition), ("maxmin", maxmin_condition)):
        inst = complete_instance(counts, k, ell, measure)
        answer = cond(counts, k, ell)
        assert (solve_complete(inst) is not None) == answer == subset_dp(inst)
        row.append("YES" if answer else "NO ")
    print(f"{str(counts):>14} {k} {ell:>3} | {row[0]}  {row[1]}     | yes")

print("\nMoV allocation for counts (4, 3, 1), k = 2, ell = 0 (rows = right vertices):")
for v, row in enumerate(allocate_complete_mov((4, 3, 1), 2, 0)):
    print(f"  v{v}: {row}")

print("\nsame counts with every right vertex non-empty:")
for v, row in enumerate(allocate_complete_mov((4, 3, 1), 3, 0, nonempty=True)):
    print(f"  v{v}: {row}")
