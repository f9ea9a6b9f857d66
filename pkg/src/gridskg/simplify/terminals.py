"""
Terminal edges and terminal nodes of a cell.

A terminal edge of cell C starts at a node inside C and ends at a node
outside it. Its tail is an exit node of C; the head is an entry node of the
neighbouring cell.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Set

from gridskg.grid.cells import CellId, Direction
from gridskg.streetnet.normalize import NetworkPartition


class Role(str, Enum):
    EXIT = "exit"
    ENTRY = "entry"


@dataclass(frozen=True, order=True)
class TerminalEdge:
    segment_id: str
    tail: str
    head: str
    direction: Direction
    length: float


@dataclass(frozen=True)
class TerminalNode:
    id: str
    cell: CellId
    x: float
    y: float
    roles: FrozenSet[Role] = frozenset()

    @property
    def point(self):
        return (self.x, self.y)


def crossing_direction(tail_cell: CellId, head_cell: CellId, bearing: float) -> Direction:
    """Border crossed when moving from tail_cell to head_cell.

    A move through a cell corner changes row and column at once; the axis the
    segment travels along more steeply decides.
    """
    d_row = head_cell.row - tail_cell.row
    d_col = head_cell.col - tail_cell.col
    if d_row and d_col:
        rad = math.radians(bearing)
        if abs(math.sin(rad)) >= abs(math.cos(rad)):
            d_row = 0
        else:
            d_col = 0
    if d_col > 0:
        return Direction.EAST
    if d_col < 0:
        return Direction.WEST
    return Direction.NORTH if d_row > 0 else Direction.SOUTH


def terminal_edges(partition: NetworkPartition, cell: CellId) -> List[TerminalEdge]:
    """Segments with tail inside the cell and head outside, sorted."""
    node_cell = partition.node_cell
    result = []
    for segment in partition.subnetwork(cell).segments:
        head_cell = node_cell[segment.target]
        if head_cell != cell:
            result.append(
                TerminalEdge(
                    segment_id=segment.id,
                    tail=segment.source,
                    head=segment.target,
                    direction=crossing_direction(cell, head_cell, segment.bearing),
                    length=segment.length,
                )
            )
    return sorted(result)


def _surrounding_cells(cell: CellId) -> List[CellId]:
    # corner crossings can link diagonal cells, so look at all eight
    result = []
    for d_row in (-1, 0, 1):
        for d_col in (-1, 0, 1):
            row, col = cell.row + d_row, cell.col + d_col
            if (d_row or d_col) and row >= 0 and col >= 0:
                result.append(CellId(cell.level, row, col))
    return result


def incoming_terminal_edges(
    partition: NetworkPartition, cell: CellId
) -> List[TerminalEdge]:
    """Neighbours' terminal edges whose head lies in this cell."""
    result = []
    for neighbour in _surrounding_cells(cell):
        if neighbour not in partition.cells:
            continue
        result.extend(
            edge
            for edge in terminal_edges(partition, neighbour)
            if partition.node_cell[edge.head] == cell
        )
    return sorted(result)


def terminal_nodes(
    partition: NetworkPartition, cell: CellId, index: Optional["TerminalIndex"] = None
) -> List[TerminalNode]:
    """Exit and entry nodes of a cell with their roles, sorted by id."""
    if index is None:
        leaving: Sequence[TerminalEdge] = terminal_edges(partition, cell)
        arriving: Sequence[TerminalEdge] = incoming_terminal_edges(partition, cell)
    else:
        leaving, arriving = index.leaving_from(cell), index.arriving_in(cell)

    roles: Dict[str, Set[Role]] = {}
    for edge in leaving:
        roles.setdefault(edge.tail, set()).add(Role.EXIT)
    for edge in arriving:
        roles.setdefault(edge.head, set()).add(Role.ENTRY)

    nodes = partition.net.nodes
    return [
        TerminalNode(
            id=node_id,
            cell=cell,
            x=nodes[node_id].x,
            y=nodes[node_id].y,
            roles=frozenset(node_roles),
        )
        for node_id, node_roles in sorted(roles.items())
    ]


@dataclass
class TerminalIndex:
    """Terminal edges of every cell, by tail cell and by head cell.

    Built once per partition.
    """

    leaving: Dict[CellId, List[TerminalEdge]]
    arriving: Dict[CellId, List[TerminalEdge]]

    @classmethod
    def build(cls, partition: NetworkPartition) -> "TerminalIndex":
        leaving: Dict[CellId, List[TerminalEdge]] = {}
        arriving: Dict[CellId, List[TerminalEdge]] = {}
        for cell in partition.cells:
            edges = terminal_edges(partition, cell)
            if not edges:
                continue
            leaving[cell] = edges
            for edge in edges:
                arriving.setdefault(partition.node_cell[edge.head], []).append(edge)
        for edges in arriving.values():
            edges.sort()
        return cls(leaving=leaving, arriving=arriving)

    def leaving_from(self, cell: CellId) -> List[TerminalEdge]:
        return self.leaving.get(cell, [])

    def arriving_in(self, cell: CellId) -> List[TerminalEdge]:
        return self.arriving.get(cell, [])
