"""Fair many-to-one matchings in vertex-colored bipartite graphs.

Quick start::

    from fairmatch import random_instance, solve, verify
    inst = random_instance(8, 3, 3, ell=1, measure="maxmin", seed=1)
    outcome = solve(inst)
    if outcome.matching is not None:
        assert verify(inst, outcome.matching).valid
"""

from .errors import FairMatchError, InputError, InternalError, ResourceError
from .fpt import (
    TargetSpec,
    solve_kc,
    solve_maxmin_k,
    solve_maxmin_k_nonempty,
    solve_mov_k,
    solve_targeted_mov,
)
from .gen import (
    CnfInstance,
    ThreeDMInstance,
    complete_instance,
    planted_instance,
    random_3dm,
    random_instance,
    random_sat4occ,
    reduce_3dm_maxmin24,
    reduce_3dm_maxmin33,
    reduce_sat_mov25,
)
from .model import (
    Instance,
    Matching,
    Measure,
    Verdict,
    Violation,
    fairness,
    load_instance,
    load_matching,
    dump_instance,
    dump_matching,
    maxmin,
    mov,
    validate_instance,
    verify,
)
from .oracle import backtrack, brute_force, solve_oracle, subset_dp, subset_dp_matching
from .poly import (
    solve_complete,
    solve_complete_maxmin,
    solve_complete_mov,
    solve_direct,
    solve_maxmin_lowdeg,
    solve_mov_deg4,
    solve_two_colors,
)


def solve(instance: Instance, seed: int | None = None):
    """Route ``instance`` to the best applicable solver (with exact fallbacks).

    Returns an ``Outcome`` with ``answer`` in ``{"YES", "NO", "UNKNOWN"}``,
    the solver that decided it, and a verified matching on YES.
    """
    from argparse import Namespace

    from .cli import solve_auto

    outcome, _ = solve_auto(instance, Namespace(seed=seed, rounds=None, budget=None))
    return outcome


__all__ = [
    "CnfInstance",
    "FairMatchError",
    "InputError",
    "Instance",
    "InternalError",
    "Matching",
    "Measure",
    "ResourceError",
    "TargetSpec",
    "ThreeDMInstance",
    "Verdict",
    "Violation",
    "backtrack",
    "brute_force",
    "complete_instance",
    "dump_instance",
    "dump_matching",
    "fairness",
    "load_instance",
    "load_matching",
    "maxmin",
    "mov",
    "planted_instance",
    "random_3dm",
    "random_instance",
    "random_sat4occ",
    "reduce_3dm_maxmin24",
    "reduce_3dm_maxmin33",
    "reduce_sat_mov25",
    "solve",
    "solve_complete",
    "solve_complete_maxmin",
    "solve_complete_mov",
    "solve_direct",
    "solve_kc",
    "solve_maxmin_k",
    "solve_maxmin_k_nonempty",
    "solve_maxmin_lowdeg",
    "solve_mov_deg4",
    "solve_mov_k",
    "solve_oracle",
    "solve_targeted_mov",
    "solve_two_colors",
    "subset_dp",
    "subset_dp_matching",
    "validate_instance",
    "verify",
]
