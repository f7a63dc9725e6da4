"""Left degree at most one: the only candidate assignment is forced."""

from __future__ import annotations

from ..errors import InputError
from ..model import Instance, Matching, verify


def solve_direct(instance: Instance) -> Matching | None:
    if instance.max_left_degree > 1:
        raise InputError("solve_direct needs every left vertex to have at most one neighbor")
    if any(not a for a in instance.left_adj):
        return None
    matching = Matching(tuple(a[0] for a in instance.left_adj))
    return matching if verify(instance, matching).valid else None
