"""Measures, instances and verification on a toy committee problem.

Six applicants in two groups (colors 0 and 1) are split across two
panels (right vertices).  Each applicant lists the panels they can sit
on.  A panel is fair when its group counts differ by at most ``ell``.
"""

from fairmatch import Instance, solve, verify
from fairmatch.model import maxmin, mov

print("MoV of (3, 3, 1):", mov((3, 3, 1)), "  Max-Min of (3, 3, 1):", maxmin((3, 3, 1)))

inst = Instance(
    num_colors=2,
    left_colors=(0, 0, 0, 1, 1, 1),
    k=2,
    edges=[(0, 0), (1, 0), (1, 1), (2, 1), (3, 0), (4, 0), (4, 1), (5, 1)],
    ell=0,
    measure="maxmin",
)

outcome = solve(inst)
print(f"\nanswer {outcome.answer} via {outcome.solver}")
print("panel of each applicant:", outcome.matching.assign)
for v, members in enumerate(outcome.matching.groups(inst.k)):
    print(f"  panel {v}: applicants {members}, colors {[inst.left_colors[u] for u in members]}")

# an unbalanced split is rejected with a reason per panel
bad = (0, 1, 1, 0, 0, 1)
for violation in verify(inst, bad).violations:
    print("rejected:", violation)
