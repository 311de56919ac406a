"""Hungarian assignment over a big-M cost matrix.

The solver follows the textbook reduce / cover / adjust loop on exact
integers: reduce rows and columns, cover every zero with the fewest lines,
and while fewer than ``n`` lines suffice shift the uncovered minimum around.
When ``n`` lines are needed a zero-cost perfect matching exists and is read
off deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import (
    DataError,
    InvalidCover,
    IterationGuardExceeded,
    NegativeEntry,
    NoUncoveredCell,
    SizeMismatch,
)
from .loads import LOAD_SCALE, LoadMatrix, parse_decimal

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CostMatrix:
    """Square integer cost matrix in scaled units.

    ``synthetic[i][j]`` marks cells that were vacant in the load matrix and
    received the big-M fill. The mask survives every transformation, the
    entries do not keep the value ``big_m`` once reduced or shifted.
    """

    entries: Matrix
    synthetic: tuple[tuple[bool, ...], ...]
    big_m: int
    scale: int = 1

    def __post_init__(self):
        n = len(self.entries)
        if n < 1 or any(len(r) != n for r in self.entries):
            raise SizeMismatch("cost matrix must be square and non-empty")
        if len(self.synthetic) != n or any(len(r) != n for r in self.synthetic):
            raise SizeMismatch("synthetic mask shape differs from entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CostMatrix":
        """Plain matrix with no synthetic cells; entries are used as given."""
        entries = tuple(tuple(int(v) for v in r) for r in rows)
        n = len(entries)
        mask = tuple((False,) * n for _ in range(n))
        real = sum(sum(r) for r in entries)
        return cls(entries, mask, 1 + max(real, 0))

    @property
    def n(self) -> int:
        return len(self.entries)

    def with_entries(self, entries) -> "CostMatrix":
        return CostMatrix(tuple(tuple(r) for r in entries), self.synthetic, self.big_m, self.scale)

    def unscaled(self, value: int):
        """Convert a scaled cost back to unit-loads (int when exact)."""
        q, r = divmod(value, self.scale)
        return q if r == 0 else Fraction(value, self.scale)

    def synthetic_count(self) -> int:
        return sum(sum(r) for r in self.synthetic)


@dataclass(frozen=True)
class Assignment:
    """``partner[i] = j`` means row facility ``i`` is assigned column ``j``."""

    partner: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.partner) != list(range(len(self.partner))):
            raise SizeMismatch(f"not a permutation: {self.partner}")

    @property
    def n(self) -> int:
        return len(self.partner)

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycle decomposition, each cycle starting at its smallest member."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            k = start
            while not seen[k]:
                seen[k] = True
                cyc.append(k)
                k = self.partner[k]
            out.append(tuple(cyc))
        return out


@dataclass(frozen=True)
class LineCover:
    covered_rows: frozenset[int]
    covered_cols: frozenset[int]

    @property
    def k(self) -> int:
        return len(self.covered_rows) + len(self.covered_cols)


@dataclass(frozen=True)
class ShiftVectors:
    row: tuple[int, ...]
    col: tuple[int, ...]


class AssignmentCost(NamedTuple):
    cost: int
    uses_synthetic: bool


def to_cost_matrix(lm: LoadMatrix, big_m=None) -> CostMatrix:
    """Fill vacant cells (diagonal included) with big-M.

    ``big_m`` is in unit-loads; by default it is one more than the total load,
    which already dominates every real assignment.
    """
    total = lm.total_scaled()
    if big_m is None:
        m = total + LOAD_SCALE
    else:
        try:
            m = parse_decimal(str(big_m))
        except ValueError as exc:
            raise DataError(f"big_m: {exc}") from None
        if m <= total:
            raise DataError(f"big_m must exceed the total load {total / LOAD_SCALE:g}")
    entries = tuple(tuple(m if v is None else v for v in row) for row in lm.cells)
    mask = tuple(tuple(v is None for v in row) for row in lm.cells)
    return CostMatrix(entries, mask, m, LOAD_SCALE)


def reduce(cm: CostMatrix) -> CostMatrix:
    rows = [[v - min(r) for v in r] for r in cm.entries]
    col_min = [min(col) for col in zip(*rows)]
    return cm.with_entries([v - col_min[j] for j, v in enumerate(r)] for r in rows)


def max_zero_matching(entries: Matrix) -> list[int]:
    """Maximum matching on zero cells. Returns row -> column, -1 if unmatched.

    Augmenting paths are searched row by row in ascending order, scanning
    columns in ascending order, so the result is deterministic.
    """
    n = len(entries)
    zeros = [[j for j, v in enumerate(r) if v == 0] for r in entries]
    col_owner = [-1] * n

    def augment(i, visited):
        for j in zeros[i]:
            if visited[j]:
                continue
            visited[j] = True
            if col_owner[j] == -1 or augment(col_owner[j], visited):
                col_owner[j] = i
                return True
        return False

    for i in range(n):
        augment(i, [False] * n)
    row_match = [-1] * n
    for j, i in enumerate(col_owner):
        if i != -1:
            row_match[i] = j
    return row_match


def min_line_cover(cm: CostMatrix) -> LineCover:
    # Koenig: from unmatched rows follow zero edges to columns and matched edges
    # back to rows; cover = unreached rows + reached columns.
    entries = cm.entries
    n = cm.n
    row_match = max_zero_matching(entries)
    col_match = [-1] * n
    for i, j in enumerate(row_match):
        if j != -1:
            col_match[j] = i

    row_seen = [False] * n
    col_seen = [False] * n
    stack = [i for i in range(n) if row_match[i] == -1]
    for i in stack:
        row_seen[i] = True
    while stack:
        i = stack.pop()
        for j in range(n):
            if entries[i][j] == 0 and not col_seen[j]:
                col_seen[j] = True
                r = col_match[j]
                if r != -1 and not row_seen[r]:
                    row_seen[r] = True
                    stack.append(r)
    return LineCover(
        frozenset(i for i in range(n) if not row_seen[i]),
        frozenset(j for j in range(n) if col_seen[j]),
    )


def adjust(cm: CostMatrix, cover: LineCover) -> CostMatrix:
    n = cm.n
    rows, cols = cover.covered_rows, cover.covered_cols
    uncovered = [
        cm.entries[i][j] for i in range(n) if i not in rows for j in range(n) if j not in cols
    ]
    if cover.k >= n or not uncovered:
        raise NoUncoveredCell(f"cover with k={cover.k} leaves nothing to adjust")
    m = min(uncovered)
    if m <= 0:
        raise InvalidCover("cover misses a zero entry")
    out = []
    for i, r in enumerate(cm.entries):
        new = []
        for j, v in enumerate(r):
            hits = (i in rows) + (j in cols)
            if hits == 0:
                v -= m
            elif hits == 2:
                v += m
            new.append(v)
        out.append(new)
    return cm.with_entries(out)


def _has_perfect_matching(entries, rows, cols) -> bool:
    sub = tuple(tuple(entries[i][j] for j in cols) for i in rows)
    return all(j != -1 for j in max_zero_matching(sub))


def extract_zero_assignment(entries: Matrix) -> Assignment:
    """Pick an all-zero perfect matching.

    Repeatedly commit the zero in the open row with the fewest open zeros
    (ties: lowest row, then lowest column), skipping any zero that would leave
    the remainder without a perfect matching.
    """
    n = len(entries)
    open_rows = list(range(n))
    open_cols = list(range(n))
    partner = [-1] * n
    while open_rows:
        counts = [(sum(entries[i][j] == 0 for j in open_cols), i) for i in open_rows]
        counts.sort()
        committed = False
        for _, i in counts:
            for j in open_cols:
                if entries[i][j] != 0:
                    continue
                rest_rows = [r for r in open_rows if r != i]
                rest_cols = [c for c in open_cols if c != j]
                if rest_rows and not _has_perfect_matching(entries, rest_rows, rest_cols):
                    continue
                partner[i] = j
                open_rows, open_cols = rest_rows, rest_cols
                committed = True
                break
            if committed:
                break
        if not committed:
            raise DataError("matrix has no zero perfect matching")
    return Assignment(tuple(partner))


def hungarian_solve(cm: CostMatrix, guard: Optional[int] = None) -> Assignment:
    if any(v < 0 for r in cm.entries for v in r):
        raise NegativeEntry("costs must be nonnegative")
    n = cm.n
    limit = 10 * n * n if guard is None else guard
    work = reduce(cm)
    for _ in range(limit + 1):
        cover = min_line_cover(work)
        if cover.k == n:
            return extract_zero_assignment(work.entries)
        work = adjust(work, cover)
    raise IterationGuardExceeded(f"no optimal cover after {limit} adjustment rounds")


def shift_costs(cm: CostMatrix, sv: ShiftVectors) -> CostMatrix:
    n = cm.n
    if len(sv.row) != n or len(sv.col) != n:
        raise SizeMismatch("shift vectors must have length n")
    out = [[v + sv.row[i] + sv.col[j] for j, v in enumerate(r)] for i, r in enumerate(cm.entries)]
    if any(v < 0 for r in out for v in r):
        raise NegativeEntry("shift makes an entry negative")
    return cm.with_entries(out)


def assignment_cost(cm: CostMatrix, asg: Assignment) -> AssignmentCost:
    if asg.n != cm.n:
        raise SizeMismatch(f"assignment of size {asg.n} for a {cm.n}x{cm.n} matrix")
    cost = sum(cm.entries[i][j] for i, j in enumerate(asg.partner))
    synth = any(cm.synthetic[i][j] for i, j in enumerate(asg.partner))
    return AssignmentCost(cost, synth)
