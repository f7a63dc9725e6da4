"""Polynomial-time special cases."""

from .complete import (
    allocate_complete_maxmin,
    allocate_complete_mov,
    kappa_partition,
    maxmin_condition,
    mov_condition,
    realize,
    solve_complete,
    solve_complete_maxmin,
    solve_complete_mov,
)
from .direct import solve_direct
from .general_factor import GeneralFactorInstance, has_small_gaps, lists_have_small_gaps, solve_general_factor_exact
from .maxmin_lowdeg import lowdeg_applicable, solve_maxmin_lowdeg
from .mov_deg4 import VertexGadget, build_general_factor, gadget_for, solve_mov_deg4
from .two_colors import (
    ADMISSIBLE,
    GADGETS,
    GadgetKit2C,
    boundary_patterns,
    build_two_color_graph,
    gadget_multiplicities,
    representable,
    solve_two_colors,
)

__all__ = [
    "ADMISSIBLE",
    "GADGETS",
    "GadgetKit2C",
    "GeneralFactorInstance",
    "VertexGadget",
    "allocate_complete_maxmin",
    "allocate_complete_mov",
    "boundary_patterns",
    "build_general_factor",
    "build_two_color_graph",
    "gadget_for",
    "gadget_multiplicities",
    "has_small_gaps",
    "kappa_partition",
    "lists_have_small_gaps",
    "lowdeg_applicable",
    "maxmin_condition",
    "mov_condition",
    "realize",
    "representable",
    "solve_complete",
    "solve_complete_maxmin",
    "solve_complete_mov",
    "solve_direct",
    "solve_general_factor_exact",
    "solve_maxmin_lowdeg",
    "solve_mov_deg4",
    "solve_two_colors",
]
