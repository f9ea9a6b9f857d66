"""Square grid cell system."""

from gridskg.grid.cells import (
    CellBounds,
    CellId,
    CellRange,
    Direction,
    Point,
    ancestor_at,
    buffer_cells,
    cell_bounds,
    cell_center,
    cell_of_point,
    cells_in_range,
    chebyshev,
    child_cells,
    neighbors4,
    parent_cell,
)
from gridskg.grid.coverage import cells_covering

__all__ = [
    "CellBounds",
    "CellId",
    "CellRange",
    "Direction",
    "Point",
    "ancestor_at",
    "buffer_cells",
    "cell_bounds",
    "cell_center",
    "cell_of_point",
    "cells_covering",
    "cells_in_range",
    "chebyshev",
    "child_cells",
    "neighbors4",
    "parent_cell",
]
