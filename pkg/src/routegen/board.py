"""MoonBoard 2017 grid geometry and the binary hold-vector encoding.

The board is an 11-column (A..K) by 18-row grid, 198 cells total. Rows are
numbered 1..18 from the bottom in the printed labels; internally both axes
are zero-based with row 0 at the bottom, so the top row is row 17.

A problem is encoded as a length-198 binary vector with one bit per cell.
The bit order is row-major from the bottom-left: ``index = row * 11 + col``.
That puts the top row at indices 187..197, which keeps the finish-hold
checks simple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import EmptyRoute, MalformedPosition

COLS = 11
ROWS = 18
NUM_HOLDS = COLS * ROWS  # 198

COLUMN_LETTERS = "ABCDEFGHIJK"

#: Top row of the board (finish holds live here).
TOP_ROW = ROWS - 1
#: Start holds must sit strictly below this row (rows 1..6 in 1-based labels).
START_ROW_LIMIT = 6

_POSITION_RE = re.compile(r"^([A-K])(1[0-8]|[1-9])$")


class HoldRole(Enum):
    START = "start"
    MID = "mid"
    FINISH = "finish"

    @classmethod
    def from_label(cls, label: str) -> "HoldRole":
        try:
            return cls(label)
        except ValueError:
            raise MalformedPosition(
                f"unknown hold role {label!r} (expected start/mid/finish)"
            ) from None


@dataclass(frozen=True, order=True)
class GridCoord:
    """A board cell: ``col`` in [0, 10] (A..K), ``row`` in [0, 17] (bottom up)."""

    col: int
    row: int

    def __post_init__(self):
        if not (0 <= self.col < COLS and 0 <= self.row < ROWS):
            raise MalformedPosition(f"coordinate out of range: col={self.col} row={self.row}")

    @property
    def label(self) -> str:
        return f"{COLUMN_LETTERS[self.col]}{self.row + 1}"


def parse_position(text: str) -> GridCoord:
    """Parse a position label like ``"B7"`` into a :class:`GridCoord`.

    Accepts exactly the 198 labels A1..K18 (uppercase column letter, 1-based
    row number without leading zeros). Anything else raises
    :class:`MalformedPosition`.
    """
    m = _POSITION_RE.match(text)
    if m is None:
        raise MalformedPosition(f"bad position label {text!r}")
    return GridCoord(col=COLUMN_LETTERS.index(m.group(1)), row=int(m.group(2)) - 1)


def format_position(coord: GridCoord) -> str:
    return coord.label


def coord_to_index(coord: GridCoord) -> int:
    """Row-major bit index from the bottom-left: ``row * 11 + col``."""
    return coord.row * COLS + coord.col


def index_to_coord(index: int) -> GridCoord:
    if not (0 <= index < NUM_HOLDS):
        raise MalformedPosition(f"hold index {index} outside [0, {NUM_HOLDS - 1}]")
    return GridCoord(col=index % COLS, row=index // COLS)


def all_coords():
    """All 198 cells in index order."""
    return [index_to_coord(i) for i in range(NUM_HOLDS)]


def grid_distance(a: GridCoord, b: GridCoord) -> float:
    """Euclidean distance between two cells, in grid units."""
    return float(np.hypot(a.col - b.col, a.row - b.row))


@dataclass(frozen=True)
class Problem:
    """A named route: occupied holds with roles, plus an optional grade label."""

    name: str
    holds: tuple[tuple[GridCoord, HoldRole], ...]
    grade: str | None = None

    def __post_init__(self):
        if not self.holds:
            raise EmptyRoute(f"problem {self.name!r} has no holds")
        object.__setattr__(self, "holds", tuple(self.holds))
        coords = [c for c, _ in self.holds]
        if len(set(coords)) != len(coords):
            seen: set[GridCoord] = set()
            dupes = []
            for c in coords:
                if c in seen:
                    dupes.append(c.label)
                seen.add(c)
            raise MalformedPosition(
                f"problem {self.name!r} repeats hold(s): {', '.join(dupes)}"
            )

    @property
    def coords(self) -> tuple[GridCoord, ...]:
        return tuple(c for c, _ in self.holds)

    @property
    def hold_count(self) -> int:
        return len(self.holds)

    def role_of(self, coord: GridCoord) -> HoldRole:
        for c, r in self.holds:
            if c == coord:
                return r
        raise KeyError(coord)


def problem_to_vector(problem: Problem) -> np.ndarray:
    """Binary hold vector: 1 at each occupied cell, 0 elsewhere.

    Returns a length-198 uint8 array whose popcount equals the problem's
    hold count.
    """
    bits = np.zeros(NUM_HOLDS, dtype=np.uint8)
    for coord, _ in problem.holds:
        bits[coord_to_index(coord)] = 1
    return bits


def infer_roles(coords: list[GridCoord]) -> list[tuple[GridCoord, HoldRole]]:
    """Assign roles to a bare hold set.

    Finish: every hold on the top row. Start: the hold(s) on the lowest
    occupied row, provided that row is below row 7 (1-based); otherwise no
    start is inferred. Everything else is mid. This is a heuristic; decoded
    model output carries no role information.
    """
    if not coords:
        return []
    min_row = min(c.row for c in coords)
    out = []
    for c in coords:
        if c.row == TOP_ROW:
            role = HoldRole.FINISH
        elif c.row == min_row and min_row < START_ROW_LIMIT:
            role = HoldRole.START
        else:
            role = HoldRole.MID
        out.append((c, role))
    return out


def vector_to_problem(bits: np.ndarray, name: str = "decoded", grade: str | None = None) -> Problem:
    """Inverse of :func:`problem_to_vector`, with heuristic role inference.

    Raises :class:`EmptyRoute` for the all-zero vector.
    """
    bits = np.asarray(bits)
    if bits.shape != (NUM_HOLDS,):
        raise MalformedPosition(f"hold vector must have length {NUM_HOLDS}, got shape {bits.shape}")
    coords = [index_to_coord(int(i)) for i in np.flatnonzero(bits)]
    if not coords:
        raise EmptyRoute(f"problem {name!r} has no holds")
    return Problem(name=name, holds=tuple(infer_roles(coords)), grade=grade)
