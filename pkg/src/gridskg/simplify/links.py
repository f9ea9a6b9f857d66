"""
Links of a cell in the simplified network.

Intra links join an entry node to every exit node reachable inside the cell,
weighted by the shortest path through the cell subnetwork. Cross links materialize the
cell's terminal edges. Joining an intra link with the following cross link
gives the terminal-to-neighbour link of the composed view.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from gridskg.grid.cells import CellId, Direction
from gridskg.simplify.terminals import (
    Role,
    TerminalEdge,
    TerminalNode,
    terminal_edges,
    terminal_nodes,
)
from gridskg.streetnet.normalize import NetworkPartition


class LinkType(str, Enum):
    INTRA = "intra"
    CROSS_N = "cross-N"
    CROSS_S = "cross-S"
    CROSS_E = "cross-E"
    CROSS_W = "cross-W"

    @classmethod
    def crossing(cls, direction: Direction) -> "LinkType":
        return cls(f"cross-{direction.value}")

    @property
    def is_cross(self) -> bool:
        return self is not LinkType.INTRA


@dataclass(frozen=True, order=True)
class CellLink:
    source: str
    target: str
    link_type: LinkType
    weight: float
    via_cell: CellId


def link_order(link: CellLink) -> Tuple:
    """Sort key giving the same order as comparing links field by field."""
    cell = link.via_cell
    return (
        link.source,
        link.target,
        link.link_type.value,
        link.weight,
        cell.level,
        cell.row,
        cell.col,
    )


def cell_graph(partition: NetworkPartition, cell: CellId) -> nx.DiGraph:
    """Directed graph of the segments with both ends inside the cell."""
    node_cell = partition.node_cell
    sub = partition.subnetwork(cell)
    lengths: Dict[Tuple[str, str], float] = {}
    for segment in sub.segments:
        if node_cell[segment.target] != cell:
            continue
        key = (segment.source, segment.target)
        if key not in lengths or segment.length < lengths[key]:
            lengths[key] = segment.length

    graph = nx.DiGraph()
    graph.add_nodes_from(sub.nodes)
    graph.add_weighted_edges_from(
        ((u, v, length) for (u, v), length in lengths.items()), weight="length"
    )
    return graph


def intra_cell_links(
    partition: NetworkPartition,
    cell: CellId,
    nodes: Optional[Sequence[TerminalNode]] = None,
) -> List[CellLink]:
    """Entry→exit links for every pair connected inside the cell."""
    if nodes is None:
        nodes = terminal_nodes(partition, cell)
    entries = [n.id for n in nodes if Role.ENTRY in n.roles]
    exits = [n.id for n in nodes if Role.EXIT in n.roles]
    if not entries or not exits:
        return []

    graph = cell_graph(partition, cell)
    links = []
    for entry in entries:
        distances = nx.single_source_dijkstra_path_length(graph, entry, weight="length")
        for exit_node in exits:
            if exit_node in distances:
                links.append(
                    CellLink(
                        source=entry,
                        target=exit_node,
                        link_type=LinkType.INTRA,
                        weight=float(distances[exit_node]),
                        via_cell=cell,
                    )
                )
    return sorted(links, key=link_order)


def cross_links(
    partition: NetworkPartition,
    cell: CellId,
    edges: Optional[Sequence[TerminalEdge]] = None,
) -> List[CellLink]:
    """One link per terminal edge; parallel edges keep the lightest."""
    if edges is None:
        edges = terminal_edges(partition, cell)
    best: Dict[Tuple[str, str], CellLink] = {}
    for edge in edges:
        link = CellLink(
            source=edge.tail,
            target=edge.head,
            link_type=LinkType.crossing(edge.direction),
            weight=edge.length,
            via_cell=cell,
        )
        key = (edge.tail, edge.head)
        if key not in best or link.weight < best[key].weight:
            best[key] = link
    return sorted(best.values(), key=link_order)
