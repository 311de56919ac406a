"""Facilities block layout: Hungarian-seeded initial layout plus CRAFT exchange improvement."""

from .assign import (
    Assignment,
    CostMatrix,
    LineCover,
    ShiftVectors,
    adjust,
    assignment_cost,
    hungarian_solve,
    min_line_cover,
    reduce,
    shift_costs,
    to_cost_matrix,
)
from .craft import MOVE_KINDS, Move, Trace, apply_move, craft_improve, enumerate_moves
from .loads import LoadMatrix, format_load_matrix, parse_load_matrix, read_load_matrix
from .oracle import OracleResult, brute_force_assignment, brute_force_optimum
from .plan import (
    CostReport,
    FloorPlan,
    Layout,
    Slot,
    build_initial_layout,
    derive_grid,
    distance,
    layout_cost,
    render_ascii,
)

__version__ = "0.1.0"
