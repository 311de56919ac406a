"""Slot-grid floor plans, block layouts and the load-distance objective.

Facilities share one rectangular footprint and sit on a grid of slots
separated by aisles. Distances use an access-point model: two facilities in
the same column face each other across the aisle, and travel between columns
runs along the central aisle from column centre to column centre.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .assign import Assignment
from .errors import DataError, Infeasible, NoCapacity, Unplaced
from .loads import LOAD_SCALE, LoadMatrix, parse_decimal

DIM_SCALE = 10**6
COST_SCALE = LOAD_SCALE * DIM_SCALE


def _dimension(value) -> Fraction:
    if isinstance(value, Fraction):
        scaled = value * DIM_SCALE
        if scaled.denominator != 1:
            raise DataError(f"dimension {value} has more than 6 fractional digits")
        return value
    try:
        return Fraction(parse_decimal(str(value), DIM_SCALE), DIM_SCALE)
    except ValueError as exc:
        raise DataError(f"bad dimension: {exc}") from None


def unscale(value: int, scale: int):
    """Exact unscaled value: an int when integral, otherwise a Fraction."""
    f = Fraction(value, scale)
    return f.numerator if f.denominator == 1 else f


@dataclass(frozen=True)
class FloorPlan:
    floor_width: Fraction
    floor_height: Fraction
    facility_width: Fraction = Fraction(20)
    facility_height: Fraction = Fraction(10)
    aisle: Fraction = Fraction(2)

    def __post_init__(self):
        for name in ("floor_width", "floor_height", "facility_width", "facility_height", "aisle"):
            object.__setattr__(self, name, _dimension(getattr(self, name)))
        if min(self.floor_width, self.floor_height, self.facility_width, self.facility_height) <= 0:
            raise DataError("floor and facility dimensions must be positive")
        if self.aisle < 0:
            raise DataError("aisle must be nonnegative")

    @property
    def pitch(self) -> Fraction:
        """Centre-to-centre spacing of neighbouring columns."""
        return self.facility_width + self.aisle


class Slot(NamedTuple):
    row: int
    col: int


def derive_grid(fp: FloorPlan) -> tuple[int, int]:
    """Return ``(rows, cols)``; aisles sit between neighbours only."""
    cols = (fp.floor_width + fp.aisle) // (fp.facility_width + fp.aisle)
    rows = (fp.floor_height + fp.aisle) // (fp.facility_height + fp.aisle)
    if rows * cols == 0:
        raise NoCapacity("no facility fits on the floor")
    return int(rows), int(cols)


@dataclass(frozen=True)
class Layout:
    """Placement of facilities ``0..n-1`` onto slots of a ``rows x cols`` grid."""

    slot_of: tuple[Optional[Slot], ...]
    rows: int
    cols: int
    _occupant: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "slot_of", tuple(None if s is None else Slot(*s) for s in self.slot_of))
        occ = {}
        for i, s in enumerate(self.slot_of):
            if s is None:
                continue
            if not (0 <= s.row < self.rows and 0 <= s.col < self.cols):
                raise DataError(f"facility {i} placed outside the {self.rows}x{self.cols} grid")
            if s in occ:
                raise DataError(f"facilities {occ[s]} and {i} share slot {tuple(s)}")
            occ[s] = i
        object.__setattr__(self, "_occupant", occ)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Optional[int]]], rows: int, cols: int, n: int):
        """Build from column contents listed top to bottom (None = empty slot)."""
        slots: list[Optional[Slot]] = [None] * n
        for c, column in enumerate(columns):
            for r, fac in enumerate(column):
                if fac is None:
                    continue
                if slots[fac] is not None:
                    raise DataError(f"facility {fac} placed twice")
                slots[fac] = Slot(r, c)
        return cls(tuple(slots), rows, cols)

    @property
    def n(self) -> int:
        return len(self.slot_of)

    def slot(self, i: int) -> Slot:
        if not 0 <= i < self.n or self.slot_of[i] is None:
            raise Unplaced(f"facility {i} is not placed")
        return self.slot_of[i]

    def occupant(self, row: int, col: int) -> Optional[int]:
        return self._occupant.get(Slot(row, col))

    def columns(self) -> list[list[Optional[int]]]:
        return [[self.occupant(r, c) for r in range(self.rows)] for c in range(self.cols)]

    def is_complete(self) -> bool:
        return all(s is not None for s in self.slot_of)


def build_initial_layout(asg: Assignment, fp: FloorPlan, n: Optional[int] = None) -> Layout:
    """Place assigned partners next to each other.

    Cycles of the assignment are laid out in order of their smallest member,
    filling the grid column by column from the left. A two-cycle takes one
    column (lower index on top) and skips to a fresh column when the current
    one has a single free slot left, as long as the skipped slot can be
    spared. Longer cycles run down a column and continue at the top of the
    next one.
    """
    n = asg.n if n is None else n
    if n != asg.n:
        raise DataError(f"assignment covers {asg.n} facilities, expected {n}")
    rows, cols = derive_grid(fp)
    capacity = rows * cols
    if capacity < n:
        raise Infeasible(f"{n} facilities need more than the {rows}x{cols} grid's {capacity} slots")

    slots: list[Optional[Slot]] = [None] * n
    cursor = 0  # column-major slot index
    remaining = n
    for cyc in sorted(asg.cycles(), key=min):
        members = sorted(cyc) if len(cyc) == 2 else list(cyc)
        if len(cyc) == 2 and rows >= 2 and cursor % rows == rows - 1:
            if capacity - (cursor + 1) >= remaining:
                cursor += 1
        for fac in members:
            slots[fac] = Slot(cursor % rows, cursor // rows)
            cursor += 1
        remaining -= len(cyc)
    return Layout(tuple(slots), rows, cols)


def slot_distance_scaled(a: Slot, b: Slot, fp: FloorPlan) -> int:
    if a == b:
        return 0
    if a.col == b.col:
        d = fp.aisle
    else:
        d = fp.pitch * abs(a.col - b.col)
    return int(d * DIM_SCALE)


def distance(layout: Layout, fp: FloorPlan, i: int, j: int) -> Fraction:
    a, b = layout.slot(i), layout.slot(j)
    if i == j:
        return Fraction(0)
    return Fraction(slot_distance_scaled(a, b, fp), DIM_SCALE)


def slot_distance_table(rows: int, cols: int, fp: FloorPlan) -> dict[tuple[Slot, Slot], int]:
    """Scaled distance for every ordered pair of grid slots."""
    grid = [Slot(r, c) for r in range(rows) for c in range(cols)]
    return {(a, b): slot_distance_scaled(a, b, fp) for a in grid for b in grid}


class Contribution(NamedTuple):
    i: int
    j: int
    load: object
    distance: object
    product: object


@dataclass(frozen=True)
class CostReport:
    total_scaled: int
    contributions: tuple[Contribution, ...]

    @property
    def total(self):
        """Load-meters, exact."""
        return unscale(self.total_scaled, COST_SCALE)


def cost_scaled(layout: Layout, lm: LoadMatrix, fp: FloorPlan) -> int:
    """Objective in units of ``1 / COST_SCALE`` load-meters."""
    total = 0
    for i, j, v in lm.present():
        total += v * slot_distance_scaled(layout.slot(i), layout.slot(j), fp)
    return total


def layout_cost(layout: Layout, lm: LoadMatrix, fp: FloorPlan) -> CostReport:
    if layout.n != lm.n:
        raise Unplaced(f"layout places {layout.n} facilities, load matrix has {lm.n}")
    parts = []
    total = 0
    for i, j, v in lm.present():
        d = slot_distance_scaled(layout.slot(i), layout.slot(j), fp)
        total += v * d
        parts.append(
            Contribution(i, j, unscale(v, LOAD_SCALE), unscale(d, DIM_SCALE), unscale(v * d, COST_SCALE))
        )
    return CostReport(total, tuple(parts))


def render_ascii(layout: Layout, fp: Optional[FloorPlan] = None, names: Optional[Sequence[str]] = None) -> str:
    """Fixed-width text grid, one line per slot row, columns joined by ``|``.

    Empty slots print as ``.``. ``fp`` is accepted for symmetry with the SVG
    renderer; the text form only depends on the grid.
    """
    del fp
    names = [str(i) for i in range(layout.n)] if names is None else list(names)
    columns = layout.columns()
    labels = [[names[f] if f is not None else "." for f in col] for col in columns]
    widths = [max(len(s) for s in col) for col in labels]
    lines = []
    for r in range(layout.rows):
        lines.append("|".join(labels[c][r].ljust(widths[c]) for c in range(layout.cols)))
    return "\n".join(lines) + "\n"
