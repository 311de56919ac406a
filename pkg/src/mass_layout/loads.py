"""Inter-facility load matrices and their CSV format.

CSV grammar::

    # comment lines start with '#'
    facility,A,B,C
    A,-,20,
    B,10,-,15
    C,-,-,-

A cell is a nonnegative decimal with at most six fractional digits, or the
vacant marker ``-`` (an empty field is also vacant). Loads are stored as
exact integers scaled by ``LOAD_SCALE`` so that downstream zero tests never
need a tolerance.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import (
    DiagonalNotVacant,
    DuplicateName,
    HeaderMismatch,
    MalformedCell,
    NegativeLoad,
    NonSquare,
    TooManyFacilities,
)

LOAD_SCALE = 10**6
MAX_FACILITIES = 64
VACANT = "-"

Cell = Optional[int]  # None means vacant


def parse_decimal(text: str, scale: int = LOAD_SCALE) -> int:
    """Parse a plain decimal into an exact integer multiple of ``1/scale``.

    Raises ValueError when the text is not a finite decimal or carries more
    precision than ``scale`` can represent.
    """
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"not a decimal number: {text!r}") from None
    if not value.is_finite():
        raise ValueError(f"not a finite number: {text!r}")
    scaled = value * scale
    if scaled != scaled.to_integral_value():
        raise ValueError(f"too many fractional digits: {text!r}")
    return int(scaled)


def format_scaled(value: int, scale: int = LOAD_SCALE) -> str:
    """Inverse of :func:`parse_decimal`; integral values print without a point."""
    q, r = divmod(abs(value), scale)
    sign = "-" if value < 0 else ""
    if r == 0:
        return f"{sign}{q}"
    digits = len(str(scale)) - 1
    frac = str(r).rjust(digits, "0").rstrip("0")
    return f"{sign}{q}.{frac}"


def _valid_name(name: str) -> bool:
    return bool(name) and not any(ch.isspace() or ch == "," for ch in name)


@dataclass(frozen=True)
class LoadMatrix:
    """Square matrix of directed loads; ``cells[i][j]`` is scaled or None."""

    names: tuple[str, ...]
    cells: tuple[tuple[Cell, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if n < 1:
            raise NonSquare("load matrix needs at least one facility")
        if n > MAX_FACILITIES:
            raise TooManyFacilities(f"{n} facilities exceeds the limit of {MAX_FACILITIES}")
        seen = set()
        for name in self.names:
            if not _valid_name(name):
                raise HeaderMismatch(f"invalid facility name {name!r}")
            if name in seen:
                raise DuplicateName(f"duplicate facility name {name!r}")
            seen.add(name)
        if len(self.cells) != n or any(len(row) != n for row in self.cells):
            raise NonSquare(f"expected a {n}x{n} matrix")
        for i, row in enumerate(self.cells):
            for j, v in enumerate(row):
                if v is None:
                    continue
                if i == j:
                    raise DiagonalNotVacant(f"diagonal cell of {self.names[i]} must be vacant")
                if v < 0:
                    raise NegativeLoad(f"negative load {self.names[i]}->{self.names[j]}")

    @classmethod
    def from_rows(cls, names: Sequence[str], rows) -> "LoadMatrix":
        """Build from unscaled numbers (int, str, Decimal, Fraction) or None.

        A zero on the diagonal is normalised to vacant.
        """
        cells = []
        for i, row in enumerate(rows):
            out = []
            for j, v in enumerate(row):
                if v is None:
                    out.append(None)
                    continue
                if isinstance(v, Fraction):
                    scaled = v * LOAD_SCALE
                    if scaled.denominator != 1:
                        raise MalformedCell(f"load {v} not representable")
                    s = int(scaled)
                else:
                    try:
                        s = parse_decimal(str(v))
                    except ValueError as exc:
                        raise MalformedCell(str(exc)) from None
                if i == j and s == 0:
                    out.append(None)
                else:
                    out.append(s)
            cells.append(tuple(out))
        return cls(tuple(names), tuple(cells))

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def scaled(self, i: int, j: int) -> Cell:
        return self.cells[i][j]

    def load(self, i: int, j: int) -> Optional[Fraction]:
        """Unscaled load, or None when the cell is vacant."""
        v = self.cells[i][j]
        return None if v is None else Fraction(v, LOAD_SCALE)

    def present(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, scaled_load)`` for every non-vacant cell, row-major."""
        for i, row in enumerate(self.cells):
            for j, v in enumerate(row):
                if v is not None:
                    yield i, j, v

    def total_scaled(self) -> int:
        return sum(v for _, _, v in self.present())

    def permuted(self, order: Sequence[int]) -> "LoadMatrix":
        """Relabel: facility ``k`` of the result is facility ``order[k]`` here."""
        names = tuple(self.names[k] for k in order)
        cells = tuple(tuple(self.cells[a][b] for b in order) for a in order)
        return LoadMatrix(names, cells)


def parse_load_matrix(text: str) -> LoadMatrix:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, [f.strip() for f in line.split(",")]))
    if not rows:
        raise HeaderMismatch("missing header row")

    _, header = rows[0]
    if header[0].lower() != "facility":
        raise HeaderMismatch("header must start with 'facility'")
    names = header[1:]
    if not names:
        raise HeaderMismatch("header names no facilities")
    seen = set()
    for name in names:
        if not _valid_name(name):
            raise HeaderMismatch(f"invalid facility name {name!r} in header")
        if name in seen:
            raise DuplicateName(f"duplicate facility name {name!r} in header")
        seen.add(name)
    n = len(names)
    if n > MAX_FACILITIES:
        raise TooManyFacilities(f"{n} facilities exceeds the limit of {MAX_FACILITIES}")
    position = {name: k for k, name in enumerate(names)}

    by_row: dict[int, tuple[Cell, ...]] = {}
    for lineno, fields in rows[1:]:
        name, values = fields[0], fields[1:]
        if name not in position:
            raise HeaderMismatch(f"line {lineno}: row {name!r} not in header")
        i = position[name]
        if i in by_row:
            raise DuplicateName(f"line {lineno}: row {name!r} repeated")
        if len(values) != n:
            raise MalformedCell(f"line {lineno}: expected {n} values, got {len(values)}")
        cells = []
        for j, field in enumerate(values):
            if field in ("", VACANT):
                cells.append(None)
                continue
            try:
                v = parse_decimal(field)
            except ValueError as exc:
                raise MalformedCell(f"line {lineno}: {exc}") from None
            if v < 0:
                raise NegativeLoad(f"line {lineno}: negative load {field}")
            if i == j:
                if v != 0:
                    raise DiagonalNotVacant(f"line {lineno}: diagonal of {name!r} is {field}")
                cells.append(None)
                continue
            cells.append(v)
        by_row[i] = tuple(cells)

    if len(by_row) != n:
        missing = [names[k] for k in range(n) if k not in by_row]
        raise NonSquare(f"{len(by_row)} rows for {n} columns; missing {', '.join(missing)}")
    return LoadMatrix(tuple(names), tuple(by_row[k] for k in range(n)))


def format_load_matrix(lm: LoadMatrix) -> str:
    buf = io.StringIO()
    buf.write(",".join(("facility",) + lm.names) + "\n")
    for name, row in zip(lm.names, lm.cells):
        fields = [VACANT if v is None else format_scaled(v) for v in row]
        buf.write(",".join([name] + fields) + "\n")
    return buf.getvalue()


def read_load_matrix(path) -> LoadMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_load_matrix(fh.read())
