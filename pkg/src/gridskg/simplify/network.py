"""
The simplified cell network: terminal nodes joined by intra and cross links.
"""

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import geojson

from gridskg.grid.cells import CellId
from gridskg.simplify.links import CellLink, cross_links, intra_cell_links, link_order
from gridskg.simplify.terminals import TerminalIndex, TerminalNode, terminal_nodes
from gridskg.streetnet.normalize import NetworkPartition

logger = logging.getLogger(__name__)

LINKS_CSV_HEADER = ("from", "to", "link_type", "weight", "via_cell")


@dataclass(frozen=True)
class SimplifiedNetwork:
    nodes: Mapping[str, TerminalNode]
    links: FrozenSet[CellLink]
    by_cell: Mapping[CellId, Tuple[CellLink, ...]] = field(compare=False, repr=False)

    @classmethod
    def from_parts(
        cls, nodes: Mapping[str, TerminalNode], links: Iterable[CellLink]
    ) -> "SimplifiedNetwork":
        links = frozenset(links)
        by_cell: Dict[CellId, List[CellLink]] = {}
        for link in sorted(links, key=link_order):
            by_cell.setdefault(link.via_cell, []).append(link)
        return cls(
            nodes=dict(sorted(nodes.items())),
            links=links,
            by_cell={cell: tuple(items) for cell, items in sorted(by_cell.items())},
        )

    @classmethod
    def empty(cls) -> "SimplifiedNetwork":
        return cls.from_parts({}, [])

    @cached_property
    def outgoing(self) -> Dict[str, Tuple[CellLink, ...]]:
        """Links leaving each node, in sorted order."""
        result: Dict[str, List[CellLink]] = {}
        for link in sorted(self.links, key=link_order):
            result.setdefault(link.source, []).append(link)
        return {node: tuple(links) for node, links in result.items()}

    @cached_property
    def nodes_by_cell(self) -> Dict[CellId, Tuple[TerminalNode, ...]]:
        result: Dict[CellId, List[TerminalNode]] = {}
        for node in self.nodes.values():
            result.setdefault(node.cell, []).append(node)
        return {cell: tuple(sorted(ns, key=lambda n: n.id)) for cell, ns in result.items()}

    def terminal_nodes_of(self, cell: CellId) -> Tuple[TerminalNode, ...]:
        return self.nodes_by_cell.get(cell, ())


def _cell_piece(
    partition: NetworkPartition, index: TerminalIndex, cell: CellId
) -> Tuple[List[TerminalNode], List[CellLink]]:
    nodes = terminal_nodes(partition, cell, index)
    links = intra_cell_links(partition, cell, nodes)
    links += cross_links(partition, cell, index.leaving_from(cell))
    return nodes, links


def build_simplified_network(
    partition: NetworkPartition,
    cells: Optional[Iterable[CellId]] = None,
    workers: int = 1,
) -> SimplifiedNetwork:
    """Join the per-cell terminal nodes and links into one network.

    Cross links whose head lies outside the requested cells are dropped.

    Args:
        partition: Partition of a normalized network
        cells: Cells of interest; defaults to every non-empty cell
        workers: Threads used for per-cell construction

    Returns:
        SimplifiedNetwork, identical for any order or worker count
    """
    wanted = sorted(set(cells) if cells is not None else partition.cells)
    covered = set(wanted)
    index = TerminalIndex.build(partition)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(lambda c: _cell_piece(partition, index, c), wanted))
    else:
        pieces = [_cell_piece(partition, index, cell) for cell in wanted]

    nodes: Dict[str, TerminalNode] = {}
    links: List[CellLink] = []
    for cell_nodes, cell_links in pieces:
        for node in cell_nodes:
            nodes[node.id] = node
        links.extend(cell_links)

    kept = [
        link
        for link in links
        if partition.node_cell[link.target] in covered
    ]
    logger.info(
        "simplified %d cells into %d terminal nodes and %d links (%d dangling dropped)",
        len(wanted),
        len(nodes),
        len(kept),
        len(links) - len(kept),
    )
    return SimplifiedNetwork.from_parts(nodes, kept)


def remove_cells(sn: SimplifiedNetwork, cells: Iterable[CellId]) -> SimplifiedNetwork:
    """A copy without the given cells: their links, links into them, their nodes.

    Nodes left without any link by the removal are dropped as well.
    """
    removed = set(cells)
    if not removed:
        return sn

    def touches_removed(link: CellLink) -> bool:
        return (
            link.via_cell in removed
            or sn.nodes[link.source].cell in removed
            or sn.nodes[link.target].cell in removed
        )

    kept = [link for link in sn.links if not touches_removed(link)]
    lost = {
        node_id
        for link in sn.links
        if touches_removed(link)
        for node_id in (link.source, link.target)
    }
    still_linked = {node_id for link in kept for node_id in (link.source, link.target)}
    nodes = {
        node_id: node
        for node_id, node in sn.nodes.items()
        if node.cell not in removed and (node_id in still_linked or node_id not in lost)
    }
    return SimplifiedNetwork.from_parts(nodes, kept)


def write_links_csv(sn: SimplifiedNetwork, stream: IO[str]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(LINKS_CSV_HEADER)
    for link in sorted(sn.links, key=link_order):
        writer.writerow(
            [link.source, link.target, link.link_type.value, repr(link.weight), str(link.via_cell)]
        )


def network_to_geojson(sn: SimplifiedNetwork) -> geojson.FeatureCollection:
    """Terminal nodes as points and links as straight lines for viewers."""
    features = []
    for node in sn.nodes.values():
        features.append(
            geojson.Feature(
                geometry=geojson.Point((node.x, node.y)),
                properties={
                    "kind": "terminal_node",
                    "id": node.id,
                    "cell": str(node.cell),
                    "roles": sorted(r.value for r in node.roles),
                },
            )
        )
    for link in sorted(sn.links, key=link_order):
        a, b = sn.nodes[link.source], sn.nodes[link.target]
        features.append(
            geojson.Feature(
                geometry=geojson.LineString([(a.x, a.y), (b.x, b.y)]),
                properties={
                    "kind": "link",
                    "from": link.source,
                    "to": link.target,
                    "link_type": link.link_type.value,
                    "weight": link.weight,
                    "via_cell": str(link.via_cell),
                },
            )
        )
    return geojson.FeatureCollection(features)
