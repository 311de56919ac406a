"""Exhaustive references for small instances.

Both searches enumerate every candidate in lexicographic order and keep the
first optimum as the witness, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Union

from .assign import Assignment, CostMatrix
from .errors import TooLarge
from .loads import LoadMatrix
from .plan import COST_SCALE, FloorPlan, Layout, Slot, derive_grid, slot_distance_table, unscale

MAX_ORACLE_N = 8


@dataclass(frozen=True)
class OracleResult:
    best_cost: object
    witness: Union[Assignment, Layout]
    optima_count: int


def all_assignment_costs(cm: CostMatrix) -> dict[tuple[int, ...], int]:
    """Cost of every permutation, keyed by the permutation."""
    if cm.n > MAX_ORACLE_N:
        raise TooLarge(f"n={cm.n} exceeds the oracle limit of {MAX_ORACLE_N}")
    e = cm.entries
    return {p: sum(e[i][j] for i, j in enumerate(p)) for p in permutations(range(cm.n))}


def optimal_assignments(cm: CostMatrix) -> set[tuple[int, ...]]:
    costs = all_assignment_costs(cm)
    best = min(costs.values())
    return {p for p, c in costs.items() if c == best}


def brute_force_assignment(cm: CostMatrix) -> OracleResult:
    costs = all_assignment_costs(cm)
    best = min(costs.values())
    optima = [p for p, c in costs.items() if c == best]
    return OracleResult(best, Assignment(min(optima)), len(optima))


def brute_force_optimum(lm: LoadMatrix, fp: FloorPlan) -> OracleResult:
    """Minimum load-distance cost over every injective facility-to-slot map."""
    rows, cols = derive_grid(fp)
    if lm.n > MAX_ORACLE_N or rows * cols > MAX_ORACLE_N:
        raise TooLarge(
            f"oracle handles at most {MAX_ORACLE_N} facilities and slots "
            f"(got {lm.n} facilities, {rows * cols} slots)"
        )
    slots = [Slot(r, c) for r in range(rows) for c in range(cols)]
    dist = slot_distance_table(rows, cols, fp)
    loads = list(lm.present())

    best = None
    witness = None
    count = 0
    for placement in permutations(slots, lm.n):
        cost = sum(v * dist[placement[i], placement[j]] for i, j, v in loads)
        if best is None or cost < best:
            best, witness, count = cost, placement, 1
        elif cost == best:
            count += 1
    if best is None:
        raise TooLarge("grid has fewer slots than facilities")
    return OracleResult(unscale(best, COST_SCALE), Layout(witness, rows, cols), count)
