from .clique import (
    absorb_component,
    break_G2_no_V4,
    break_G2_via_V4,
    build_clique_component,
    fix_isolated_in_V1,
    insert_V1_edge_below,
    open_V1_nonedge,
    reduce_indegree,
    relocate_pair,
)
from .connect import connect, connect_two_regular, permute_cycle, swap_into_neighbourhood
from .fragments import (
    connect_fragments,
    flip_as_delta_switches,
    switch_as_delta_switches,
    switch_path,
    triangle_at,
)
from .trace import InternalContradiction, NoWitness, Precondition, StepTrace

__all__ = [
    "InternalContradiction",
    "NoWitness",
    "Precondition",
    "StepTrace",
    "absorb_component",
    "break_G2_no_V4",
    "break_G2_via_V4",
    "build_clique_component",
    "connect",
    "connect_fragments",
    "connect_two_regular",
    "fix_isolated_in_V1",
    "flip_as_delta_switches",
    "insert_V1_edge_below",
    "open_V1_nonedge",
    "permute_cycle",
    "reduce_indegree",
    "relocate_pair",
    "swap_into_neighbourhood",
    "switch_as_delta_switches",
    "switch_path",
    "triangle_at",
]
