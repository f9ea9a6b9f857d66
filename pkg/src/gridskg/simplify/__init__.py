"""Terminal extraction and the simplified cell-link network."""

from gridskg.simplify.links import (
    CellLink,
    LinkType,
    cross_links,
    intra_cell_links,
    link_order,
)
from gridskg.simplify.network import (
    SimplifiedNetwork,
    build_simplified_network,
    network_to_geojson,
    remove_cells,
    write_links_csv,
)
from gridskg.simplify.terminals import (
    Role,
    TerminalEdge,
    TerminalIndex,
    TerminalNode,
    terminal_edges,
    terminal_nodes,
)

__all__ = [
    "CellLink",
    "LinkType",
    "Role",
    "SimplifiedNetwork",
    "TerminalEdge",
    "TerminalIndex",
    "TerminalNode",
    "build_simplified_network",
    "cross_links",
    "intra_cell_links",
    "link_order",
    "network_to_geojson",
    "remove_cells",
    "terminal_edges",
    "terminal_nodes",
    "write_links_csv",
]
