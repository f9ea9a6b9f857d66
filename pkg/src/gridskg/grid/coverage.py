import math
from typing import List, Sequence, Union

from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon
from shapely.prepared import prep

from gridskg.config import GridConfig
from gridskg.grid.cells import CellId, CellRange, Point, cell_center, cells_in_range
from gridskg.utils.error_handling import InvalidInputError


def as_polygon(poly: Union[Polygon, Sequence[Point]]) -> Polygon:
    """Accept a shapely polygon or a vertex sequence in projected meters."""
    if isinstance(poly, Polygon):
        vertices = list(poly.exterior.coords)
    else:
        vertices = [(float(x), float(y)) for x, y in poly]
    if len(set(vertices)) < 3:
        raise InvalidInputError(
            f"degenerate polygon: {len(set(vertices))} distinct vertices"
        )
    return poly if isinstance(poly, Polygon) else Polygon(vertices)


def cells_covering(
    poly: Union[Polygon, Sequence[Point]], level: int, cfg: GridConfig
) -> List[CellId]:
    """Cells whose center lies inside the polygon, in row-major order."""
    polygon = as_polygon(poly)
    edge = cfg.edge_length(level)
    min_x, min_y, max_x, max_y = polygon.bounds

    col_min = max(math.floor((min_x - cfg.origin_x) / edge), 0)
    col_max = math.floor((max_x - cfg.origin_x) / edge)
    row_min = max(math.floor((min_y - cfg.origin_y) / edge), 0)
    row_max = math.floor((max_y - cfg.origin_y) / edge)
    if col_max < col_min or row_max < row_min:
        return []

    prepared = prep(polygon)
    candidates = cells_in_range(CellRange(row_min, row_max, col_min, col_max), level)
    return [
        cell
        for cell in candidates
        if prepared.contains(ShapelyPoint(cell_center(cell, cfg)))
    ]
