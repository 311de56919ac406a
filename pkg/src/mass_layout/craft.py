"""CRAFT-style exchange improvement.

Each round evaluates every enabled exchange of the current layout and applies
the one with the most negative cost change; rounds repeat until nothing
improves. Besides the classic facility 2-swaps and 3-rotations, whole columns
can be exchanged or rotated: on a grid of equal-area blocks that is the same
move at column granularity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import DataError
from .loads import LoadMatrix
from .plan import COST_SCALE, FloorPlan, Layout, Slot, slot_distance_scaled, cost_scaled, unscale

FACILITY_SWAP = "facility-2-swap"
FACILITY_ROTATION = "facility-3-rotation"
COLUMN_SWAP = "column-2-swap"
COLUMN_ROTATION = "column-3-rotation"
MOVE_KINDS = (FACILITY_SWAP, FACILITY_ROTATION, COLUMN_SWAP, COLUMN_ROTATION)


@dataclass(frozen=True)
class Move:
    """An exchange and its exact cost change (after minus before).

    For rotations, ``participants[k]`` moves to where ``participants[k+1]``
    was, and the last one wraps around to the first.
    """

    kind: str
    participants: tuple[int, ...]
    delta_scaled: int = 0

    @property
    def delta(self):
        return unscale(self.delta_scaled, COST_SCALE)


@dataclass(frozen=True)
class Step:
    move: Move
    cost_after_scaled: int

    @property
    def cost_after(self):
        return unscale(self.cost_after_scaled, COST_SCALE)


@dataclass
class Trace:
    initial_cost_scaled: int
    accepted: list[Step] = field(default_factory=list)
    hit_max_iters: bool = False

    @property
    def final_cost_scaled(self) -> int:
        return self.accepted[-1].cost_after_scaled if self.accepted else self.initial_cost_scaled

    @property
    def initial_cost(self):
        return unscale(self.initial_cost_scaled, COST_SCALE)

    @property
    def final_cost(self):
        return unscale(self.final_cost_scaled, COST_SCALE)


def _check_kinds(kinds: Iterable[str]) -> tuple[str, ...]:
    kinds = tuple(kinds)
    unknown = [k for k in kinds if k not in MOVE_KINDS]
    if unknown:
        raise DataError(f"unknown move kind(s): {', '.join(unknown)}")
    return tuple(k for k in MOVE_KINDS if k in kinds)


def _candidates(layout: Layout, kinds: Sequence[str]):
    placed = [i for i in range(layout.n) if layout.slot_of[i] is not None]
    for kind in kinds:
        if kind == FACILITY_SWAP:
            for pair in combinations(placed, 2):
                yield kind, pair
        elif kind == FACILITY_ROTATION:
            for a, b, c in combinations(placed, 3):
                yield kind, (a, b, c)
                yield kind, (a, c, b)
        elif kind == COLUMN_SWAP:
            for pair in combinations(range(layout.cols), 2):
                yield kind, pair
        elif kind == COLUMN_ROTATION:
            for a, b, c in combinations(range(layout.cols), 3):
                yield kind, (a, b, c)
                yield kind, (a, c, b)


def moved_slots(layout: Layout, kind: str, participants: Sequence[int]) -> dict[int, Slot]:
    """New slot of every facility the move relocates."""
    if kind in (FACILITY_SWAP, FACILITY_ROTATION):
        if len(set(participants)) != len(participants):
            raise DataError("move participants must be distinct")
        old = [layout.slot(f) for f in participants]
        k = len(participants)
        return {f: old[(idx + 1) % k] for idx, f in enumerate(participants)}
    if kind in (COLUMN_SWAP, COLUMN_ROTATION):
        if len(set(participants)) != len(participants):
            raise DataError("move participants must be distinct")
        if any(not 0 <= c < layout.cols for c in participants):
            raise DataError(f"column out of range in {participants}")
        k = len(participants)
        out = {}
        for idx, c in enumerate(participants):
            target = participants[(idx + 1) % k]
            for r in range(layout.rows):
                f = layout.occupant(r, c)
                if f is not None:
                    out[f] = Slot(r, target)
        return out
    raise DataError(f"unknown move kind {kind!r}")


def apply_move(layout: Layout, move: Move) -> Layout:
    new = moved_slots(layout, move.kind, move.participants)
    slots = tuple(new.get(i, s) for i, s in enumerate(layout.slot_of))
    return Layout(slots, layout.rows, layout.cols)


class _DeltaEvaluator:
    """Cost change of a move, touching only loads incident to moved facilities."""

    def __init__(self, lm: LoadMatrix, fp: FloorPlan):
        self.fp = fp
        self.loads = list(lm.present())
        self.incident: list[list[int]] = [[] for _ in range(lm.n)]
        for idx, (i, j, _) in enumerate(self.loads):
            self.incident[i].append(idx)
            if j != i:
                self.incident[j].append(idx)

    def delta(self, layout: Layout, new: dict[int, Slot]) -> int:
        seen = set()
        d = 0
        for f in new:
            for idx in self.incident[f]:
                if idx in seen:
                    continue
                seen.add(idx)
                i, j, v = self.loads[idx]
                si, sj = layout.slot(i), layout.slot(j)
                ni, nj = new.get(i, si), new.get(j, sj)
                d += v * (slot_distance_scaled(ni, nj, self.fp) - slot_distance_scaled(si, sj, self.fp))
        return d


def enumerate_moves(layout: Layout, lm: LoadMatrix, fp: FloorPlan, kinds: Iterable[str] = MOVE_KINDS) -> list[Move]:
    """All candidate moves of the enabled kinds with exact deltas.

    Ordered by kind (as in ``MOVE_KINDS``), then lexicographically by
    participants.
    """
    kinds = _check_kinds(kinds)
    ev = _DeltaEvaluator(lm, fp)
    out = []
    for kind, parts in _candidates(layout, kinds):
        new = moved_slots(layout, kind, parts)
        out.append(Move(kind, parts, ev.delta(layout, new)))
    return out


def craft_improve(
    layout: Layout,
    lm: LoadMatrix,
    fp: FloorPlan,
    kinds: Iterable[str] = MOVE_KINDS,
    max_iters: int = 1000,
) -> tuple[Layout, Trace]:
    """Steepest descent over the enabled moves.

    Only strictly improving moves are taken; among equal deltas the first in
    enumeration order wins. If ``max_iters`` moves were accepted and another
    improving move is still available, the trace is flagged with
    ``hit_max_iters`` and the best layout so far is returned.
    """
    kinds = _check_kinds(kinds)
    if not layout.is_complete():
        raise DataError("every facility must be placed before improvement")
    current = layout
    cost = cost_scaled(current, lm, fp)
    trace = Trace(cost)
    while True:
        best: Optional[Move] = None
        for move in enumerate_moves(current, lm, fp, kinds):
            if move.delta_scaled < 0 and (best is None or move.delta_scaled < best.delta_scaled):
                best = move
        if best is None:
            break
        if len(trace.accepted) >= max_iters:
            trace.hit_max_iters = True
            break
        current = apply_move(current, best)
        cost += best.delta_scaled
        trace.accepted.append(Step(best, cost))
    return current, trace
