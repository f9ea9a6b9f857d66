"""
Border splitting and per-cell subnetworks.

After normalize() every segment's polyline lies within one (closed) cell, so
its endpoints are in the same cell or in cells touching across one border.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from shapely.geometry import LineString, MultiLineString
from shapely.ops import split

from gridskg.config import GridConfig
from gridskg.grid.cells import CellId, Point, cell_of_point
from gridskg.streetnet.loader import REVERSE_SUFFIX
from gridskg.streetnet.models import (
    CellSubnetwork,
    StreetNetwork,
    StreetNode,
    StreetSegment,
    polyline_length,
    segment_bearing,
)

logger = logging.getLogger(__name__)

# Breakpoints closer than this are merged (corner crossings, float noise);
# cut points this close to a grid line, relative to the cell edge, snap onto it.
SNAP_TOLERANCE = 1e-9


def _grid_lines(p: Point, q: Point, cfg: GridConfig, edge: float) -> MultiLineString:
    """Grid lines that can cut the straight piece p-q.

    Lines parallel to an axis-aligned piece are left out; the piece cannot
    cross them and shapely refuses to split along an overlap.
    """
    (x0, x1), (y0, y1) = sorted((p[0], q[0])), sorted((p[1], q[1]))
    lines = []
    if x0 != x1:
        first = math.floor((x0 - cfg.origin_x) / edge)
        last = math.ceil((x1 - cfg.origin_x) / edge)
        for k in range(first, last + 1):
            x = cfg.origin_x + k * edge
            lines.append([(x, y0 - edge), (x, y1 + edge)])
    if y0 != y1:
        first = math.floor((y0 - cfg.origin_y) / edge)
        last = math.ceil((y1 - cfg.origin_y) / edge)
        for k in range(first, last + 1):
            y = cfg.origin_y + k * edge
            lines.append([(x0 - edge, y), (x1 + edge, y)])
    return MultiLineString(lines)


def _snap_to_grid(point: Point, cfg: GridConfig, edge: float) -> Point:
    """Move coordinates within SNAP_TOLERANCE of a grid line onto it."""
    snapped = []
    for value, origin in ((point[0], cfg.origin_x), (point[1], cfg.origin_y)):
        line = origin + round((value - origin) / edge) * edge
        snapped.append(line if abs(line - value) <= SNAP_TOLERANCE * edge else value)
    return (snapped[0], snapped[1])


def _cut_points(p: Point, q: Point, cfg: GridConfig, level: int) -> List[Point]:
    """Points strictly between p and q where the piece meets a grid line."""
    if cell_of_point(p, level, cfg) == cell_of_point(q, level, cfg):
        return []
    edge = cfg.edge_length(level)
    parts = split(LineString([p, q]), _grid_lines(p, q, cfg, edge)).geoms
    ends = {
        _snap_to_grid(coord, cfg, edge)
        for part in parts
        for coord in (part.coords[0], part.coords[-1])
    }
    tolerance = SNAP_TOLERANCE * edge
    cuts = [c for c in ends if math.dist(c, p) > tolerance and math.dist(c, q) > tolerance]
    return sorted(cuts, key=lambda c: math.dist(p, c))


def _border_breakpoints(
    polyline: List[Point], cfg: GridConfig, level: int
) -> List[Point]:
    """Polyline vertices plus every point where it meets a grid line."""
    out = [polyline[0]]
    for p, q in zip(polyline, polyline[1:]):
        for point in _cut_points(p, q, cfg, level):
            _append_point(out, point)
        _append_point(out, q)

    end = polyline[-1]
    if out[-1] != end:
        out[-1] = end
    return out


def _append_point(points: List[Point], point: Point):
    if math.dist(points[-1], point) > SNAP_TOLERANCE:
        points.append(point)


def split_polyline(
    polyline: List[Point], cfg: GridConfig, level: int
) -> List[List[Point]]:
    """Cut a polyline into pieces that each stay inside one cell.

    Each elementary piece between breakpoints is attributed to the cell of its
    midpoint; consecutive pieces of the same cell are merged.
    """
    points = _border_breakpoints(polyline, cfg, level)
    pieces: List[List[Point]] = []
    current_cell = None
    for a, b in zip(points, points[1:]):
        mid = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
        cell = cell_of_point(mid, level, cfg)
        if cell != current_cell:
            pieces.append([a])
            current_cell = cell
        pieces[-1].append(b)
    return pieces or [list(polyline)]


def _piece_bearing(points: List[Point]) -> float:
    start = points[0]
    if points[-1] != start:
        return segment_bearing(start, points[-1])
    for point in points[1:]:
        if point != start:
            return segment_bearing(start, point)
    return 0.0


def normalize(net: StreetNetwork, cfg: GridConfig, level: int = 1) -> StreetNetwork:
    """Split every segment at the cell borders it crosses.

    Synthetic nodes get ids "split/{segment_id}/{k}". Both directions of a
    two-way street share the synthetic nodes created for the first of them.

    Args:
        net: Loaded street network
        cfg: Grid configuration
        level: Grid level whose borders are used

    Returns:
        A new, normalized StreetNetwork
    """
    nodes: Dict[str, StreetNode] = dict(net.nodes)
    segments: Dict[str, StreetSegment] = {}
    shared: Dict[Tuple[str, float, float], str] = {}

    for segment in sorted(net.segments.values(), key=lambda s: s.id):
        pieces = split_polyline(net.polyline(segment), cfg, level)
        if len(pieces) == 1:
            segments[segment.id] = segment
            continue

        base_id = segment.id
        if base_id.endswith(REVERSE_SUFFIX):
            base_id = base_id[: -len(REVERSE_SUFFIX)]

        node_ids = [segment.source]
        for k, piece in enumerate(pieces[1:]):
            x, y = piece[0]
            key = (base_id, round(x, 6), round(y, 6))
            node_id = shared.get(key)
            if node_id is None:
                node_id = f"split/{segment.id}/{k}"
                shared[key] = node_id
                nodes[node_id] = StreetNode(node_id, x, y)
            node_ids.append(node_id)
        node_ids.append(segment.target)

        for k, piece in enumerate(pieces):
            piece_id = f"{segment.id}#{k}"
            # endpoints snap to the (possibly shared) node coordinates
            piece = list(piece)
            piece[0] = nodes[node_ids[k]].point
            piece[-1] = nodes[node_ids[k + 1]].point
            segments[piece_id] = StreetSegment(
                id=piece_id,
                source=node_ids[k],
                target=node_ids[k + 1],
                length=polyline_length(piece),
                bearing=_piece_bearing(piece),
                lanes=segment.lanes,
                maxspeed=segment.maxspeed,
                road_class=segment.road_class,
                geometry=tuple(piece),
            )

    added = len(nodes) - len(net.nodes)
    logger.info(
        "normalized %d segments into %d pieces (%d border nodes added)",
        len(net.segments),
        len(segments),
        added,
    )
    return StreetNetwork(nodes=nodes, segments=segments)


def is_normalized(net: StreetNetwork, cfg: GridConfig, level: int = 1) -> bool:
    """True when no segment crosses more than one cell border."""
    return all(
        len(split_polyline(net.polyline(s), cfg, level)) == 1
        for s in net.segments.values()
    )


@dataclass
class NetworkPartition:
    """A normalized network with node cells and cell subnetworks computed once."""

    net: StreetNetwork
    cfg: GridConfig
    level: int
    node_cell: Dict[str, CellId] = field(default_factory=dict)
    cells: Dict[CellId, CellSubnetwork] = field(default_factory=dict)

    def subnetwork(self, cell: CellId) -> CellSubnetwork:
        return self.cells.get(cell) or CellSubnetwork(cell)


def partition_network(
    net: StreetNetwork, cfg: GridConfig, level: int = 1
) -> NetworkPartition:
    node_cell = {
        node_id: cell_of_point(node.point, level, cfg)
        for node_id, node in net.nodes.items()
    }
    members: Dict[CellId, List[str]] = {}
    for node_id, cell in node_cell.items():
        members.setdefault(cell, []).append(node_id)
    outgoing: Dict[CellId, List[StreetSegment]] = {}
    for segment in net.segments.values():
        outgoing.setdefault(node_cell[segment.source], []).append(segment)

    cells = {
        cell: CellSubnetwork(
            cell=cell,
            nodes=tuple(sorted(node_ids)),
            segments=tuple(sorted(outgoing.get(cell, []), key=lambda s: s.id)),
        )
        for cell, node_ids in members.items()
    }
    return NetworkPartition(net=net, cfg=cfg, level=level, node_cell=node_cell, cells=cells)


def subnetwork(net: StreetNetwork, cell: CellId, cfg: GridConfig) -> CellSubnetwork:
    """Subnetwork of one cell: nodes inside it and the segments whose tail is inside."""
    nodes = sorted(
        node_id
        for node_id, node in net.nodes.items()
        if cell_of_point(node.point, cell.level, cfg) == cell
    )
    inside = set(nodes)
    segments = sorted(
        (s for s in net.segments.values() if s.source in inside), key=lambda s: s.id
    )
    return CellSubnetwork(cell=cell, nodes=tuple(nodes), segments=tuple(segments))


def filter_by_class(net: StreetNetwork, classes) -> StreetNetwork:
    """Keep segments of the given road classes and the nodes they touch."""
    wanted = {getattr(c, "value", c) for c in classes}
    segments = {
        sid: s for sid, s in net.segments.items() if s.road_class.value in wanted
    }
    used = {s.source for s in segments.values()} | {s.target for s in segments.values()}
    nodes = {nid: n for nid, n in net.nodes.items() if nid in used}
    return StreetNetwork(nodes=nodes, segments=segments)
