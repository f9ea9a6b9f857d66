"""
Square grid cells addressed as L{level}.{row}.{col}.

Rows grow northwards and columns eastwards from the grid origin. Cell bounds
are half-open, [min, max), so every point belongs to exactly one cell per
level.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Tuple

from gridskg.config import GridConfig
from gridskg.utils.error_handling import InvalidInputError

Point = Tuple[float, float]

_CELL_ID_PATTERN = re.compile(r"^L(\d+)\.(\d+)\.(\d+)$")


class Direction(str, Enum):
    """Compass direction of a 4-neighbour or of a border crossing."""

    NORTH = "N"
    SOUTH = "S"
    EAST = "E"
    WEST = "W"


@dataclass(frozen=True, order=True)
class CellId:
    level: int
    row: int
    col: int

    def __post_init__(self):
        if self.level < 1:
            raise InvalidInputError(f"cell level must be >= 1, got {self.level}")
        if self.row < 0 or self.col < 0:
            raise InvalidInputError(
                f"cell row/col must be >= 0, got row={self.row} col={self.col}"
            )

    def __str__(self) -> str:
        return f"L{self.level}.{self.row}.{self.col}"

    @classmethod
    def parse(cls, text: str) -> "CellId":
        """Parse the canonical "L{level}.{row}.{col}" form."""
        match = _CELL_ID_PATTERN.match(text.strip())
        if not match:
            raise InvalidInputError(f"malformed cell id {text!r}")
        level, row, col = (int(g) for g in match.groups())
        return cls(level, row, col)


@dataclass(frozen=True)
class CellBounds:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def contains(self, p: Point) -> bool:
        return self.min_x <= p[0] < self.max_x and self.min_y <= p[1] < self.max_y

    def ring(self) -> List[Point]:
        """Closed counterclockwise exterior ring starting at the lower-left corner."""
        return [
            (self.min_x, self.min_y),
            (self.max_x, self.min_y),
            (self.max_x, self.max_y),
            (self.min_x, self.max_y),
            (self.min_x, self.min_y),
        ]


@dataclass(frozen=True)
class CellRange:
    """Inclusive rectangle of rows and columns."""

    row_min: int
    row_max: int
    col_min: int
    col_max: int

    def __post_init__(self):
        if self.row_min > self.row_max or self.col_min > self.col_max:
            raise InvalidInputError(f"empty cell range {self}")

    def __contains__(self, cell: CellId) -> bool:
        return (
            self.row_min <= cell.row <= self.row_max
            and self.col_min <= cell.col <= self.col_max
        )

    def __len__(self) -> int:
        return (self.row_max - self.row_min + 1) * (self.col_max - self.col_min + 1)

    @classmethod
    def bounding(cls, a: CellId, b: CellId) -> "CellRange":
        return cls(
            min(a.row, b.row), max(a.row, b.row), min(a.col, b.col), max(a.col, b.col)
        )


def cell_of_point(p: Point, level: int, cfg: GridConfig) -> CellId:
    x, y = p
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError(f"non-finite coordinates {p!r}")
    edge = cfg.edge_length(level)
    col = math.floor((x - cfg.origin_x) / edge)
    row = math.floor((y - cfg.origin_y) / edge)
    if row < 0 or col < 0:
        raise InvalidInputError(
            f"point {p!r} lies outside the grid (origin "
            f"{cfg.origin_x}, {cfg.origin_y})"
        )
    return CellId(level, row, col)


def cell_bounds(cell: CellId, cfg: GridConfig) -> CellBounds:
    edge = cfg.edge_length(cell.level)
    min_x = cfg.origin_x + cell.col * edge
    min_y = cfg.origin_y + cell.row * edge
    return CellBounds(min_x, min_y, min_x + edge, min_y + edge)


def cell_center(cell: CellId, cfg: GridConfig) -> Point:
    b = cell_bounds(cell, cfg)
    return ((b.min_x + b.max_x) / 2.0, (b.min_y + b.max_y) / 2.0)


def cells_in_range(r: CellRange, level: int) -> List[CellId]:
    """All cells of the range in row-major order."""
    return [
        CellId(level, row, col)
        for row in range(r.row_min, r.row_max + 1)
        for col in range(r.col_min, r.col_max + 1)
    ]


_NEIGHBOUR_OFFSETS = (
    (Direction.NORTH, 1, 0),
    (Direction.SOUTH, -1, 0),
    (Direction.EAST, 0, 1),
    (Direction.WEST, 0, -1),
)


def neighbors4(cell: CellId) -> List[Tuple[Direction, CellId]]:
    result = []
    for direction, d_row, d_col in _NEIGHBOUR_OFFSETS:
        row, col = cell.row + d_row, cell.col + d_col
        if row >= 0 and col >= 0:
            result.append((direction, CellId(cell.level, row, col)))
    return result


def parent_cell(cell: CellId, cfg: GridConfig) -> CellId:
    f = cfg.level_factor
    return CellId(cell.level + 1, cell.row // f, cell.col // f)


def child_cells(cell: CellId, cfg: GridConfig) -> List[CellId]:
    """The level_factor² cells one level down that tile this cell."""
    if cell.level < 2:
        raise InvalidInputError(f"level-1 cell {cell} has no children")
    f = cfg.level_factor
    return cells_in_range(
        CellRange(
            cell.row * f, cell.row * f + f - 1, cell.col * f, cell.col * f + f - 1
        ),
        cell.level - 1,
    )


def ancestor_at(cell: CellId, level: int, cfg: GridConfig) -> CellId:
    """Walk parent_cell up to the requested level."""
    if level < cell.level:
        raise InvalidInputError(f"cannot lift {cell} down to level {level}")
    while cell.level < level:
        cell = parent_cell(cell, cfg)
    return cell


def chebyshev(a: CellId, b: CellId) -> int:
    if a.level != b.level:
        raise InvalidInputError(f"cells {a} and {b} are on different levels")
    return max(abs(a.row - b.row), abs(a.col - b.col))


def buffer_cells(cells: Iterable[CellId], radius: int) -> List[CellId]:
    """Cells within Chebyshev distance `radius` of any given cell."""
    if radius < 0:
        raise InvalidInputError(f"buffer radius must be >= 0, got {radius}")
    result = set()
    for cell in cells:
        for row in range(max(cell.row - radius, 0), cell.row + radius + 1):
            for col in range(max(cell.col - radius, 0), cell.col + radius + 1):
                result.add(CellId(cell.level, row, col))
    return sorted(result)
