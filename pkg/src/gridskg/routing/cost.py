"""
Traversal costs between cells.

The orientation cost sums, over the row/column rectangle spanned by two
cells, the orientation components pointing from the first cell to the
second. The inverse mode turns that flow measure into a distance that gets
cheaper as flow grows.
"""

from enum import Enum
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from gridskg.config import GridConfig
from gridskg.grid.cells import CellId, CellRange, Direction, cells_in_range, chebyshev
from gridskg.orientation import ZERO, OrientationVector
from gridskg.utils.error_handling import InvalidInputError


class CostModel(str, Enum):
    EUCLIDEAN = "euclidean"
    ORIENTATION_RAW = "orientation-raw"
    ORIENTATION_INVERSE = "orientation-inverse"

    @classmethod
    def from_string(cls, name: str) -> "CostModel":
        try:
            return cls(name.strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise InvalidInputError(
                f"unknown cost model {name!r} (choose from {choices})"
            ) from None

    @property
    def uses_orientation(self) -> bool:
        return self is not CostModel.EUCLIDEAN

    @property
    def mode(self) -> str:
        """"raw" or "inverse" for orientation models."""
        return self.value.split("-", 1)[1] if self.uses_orientation else ""


class OrientationIndex:
    """Cell to orientation vector map; absent cells read as zero."""

    def __init__(self, vectors: Mapping[CellId, OrientationVector] = None):
        self._vectors: Dict[CellId, OrientationVector] = dict(vectors or {})

    def __getitem__(self, cell: CellId) -> OrientationVector:
        return self._vectors.get(cell, ZERO)

    def __contains__(self, cell: CellId) -> bool:
        return cell in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def __iter__(self):
        return iter(sorted(self._vectors))

    def __eq__(self, other) -> bool:
        return isinstance(other, OrientationIndex) and other._vectors == self._vectors

    def items(self) -> Iterable[Tuple[CellId, OrientationVector]]:
        return sorted(self._vectors.items())


def direction_components(origin: CellId, to: CellId) -> FrozenSet[Direction]:
    if origin.level != to.level:
        raise InvalidInputError(
            f"cells {origin} and {to} are on different levels"
        )
    result = set()
    if to.row > origin.row:
        result.add(Direction.NORTH)
    elif to.row < origin.row:
        result.add(Direction.SOUTH)
    if to.col > origin.col:
        result.add(Direction.EAST)
    elif to.col < origin.col:
        result.add(Direction.WEST)
    return frozenset(result)


def raw_orientation_sum(idx: OrientationIndex, origin: CellId, to: CellId) -> float:
    directions = sorted(direction_components(origin, to))
    if not directions:
        return 0.0
    total = 0.0
    for cell in cells_in_range(CellRange.bounding(origin, to), origin.level):
        vector = idx[cell]
        for direction in directions:
            total += vector.component(direction)
    return total


def orientation_cost(
    idx: OrientationIndex,
    origin: CellId,
    to: CellId,
    mode: str = "raw",
    cfg: GridConfig = None,
) -> float:
    """Orientation traversal cost from one cell to another.

    Args:
        idx: Per-cell orientation vectors
        origin: Cell the movement starts from
        to: Cell the movement ends in
        mode: "raw" sums the matching orientation components over the
            bounding rectangle; "inverse" divides the Chebyshev distance in
            meters by one plus the mean raw value per cell
        cfg: Grid configuration, needed for edge lengths in inverse mode

    Returns:
        Non-negative cost, 0 when both cells are the same
    """
    if mode not in ("raw", "inverse"):
        raise InvalidInputError(f"unknown orientation cost mode {mode!r}")
    if origin == to:
        direction_components(origin, to)
        return 0.0
    raw = raw_orientation_sum(idx, origin, to)
    if mode == "raw":
        return raw
    cfg = cfg or GridConfig()
    area = len(CellRange.bounding(origin, to))
    return chebyshev(origin, to) * cfg.edge_length(origin.level) / (1.0 + raw / area)
