"""
A* search over the simplified network between two cells.

Origin and target are cells; the search starts from every terminal node of
the origin cell and stops at the first terminal node of the target cell that
leaves the queue.
"""

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from gridskg.config import GridConfig
from gridskg.grid.cells import CellId
from gridskg.routing.cost import CostModel, OrientationIndex, orientation_cost
from gridskg.simplify.links import CellLink
from gridskg.simplify.network import SimplifiedNetwork
from gridskg.simplify.terminals import TerminalNode
from gridskg.utils.error_handling import InvalidInputError, NoEndpointError, UnreachableError

logger = logging.getLogger(__name__)

# split lengths are sums of float pieces and may undershoot the chord by an ulp
HEURISTIC_SLACK = 1.0 - 1e-9

PriorityFn = Callable[[str, float], Tuple[float, float]]


@dataclass(frozen=True)
class Route:
    nodes: Tuple[TerminalNode, ...]
    links: Tuple[CellLink, ...]
    cells: Tuple[CellId, ...]
    total_weight: float
    total_cost: float
    cost_model: CostModel
    explored_cells: int = 0

    @property
    def is_empty(self) -> bool:
        return not self.links

    @property
    def node_ids(self) -> List[str]:
        return [n.id for n in self.nodes]


def _endpoints(sn: SimplifiedNetwork, cell: CellId, role: str) -> Tuple[TerminalNode, ...]:
    nodes = sn.terminal_nodes_of(cell)
    if not nodes:
        raise NoEndpointError(f"{role} cell {cell} has no terminal node in the network")
    return nodes


def _cell_sequence(links: Sequence[CellLink], last: TerminalNode) -> Tuple[CellId, ...]:
    cells: List[CellId] = []
    for cell in [link.via_cell for link in links] + [last.cell]:
        if not cells or cells[-1] != cell:
            cells.append(cell)
    return tuple(cells)


def _best_first(
    sn: SimplifiedNetwork,
    sources: Sequence[TerminalNode],
    targets: Sequence[TerminalNode],
    priority: PriorityFn,
) -> Tuple[List[CellLink], TerminalNode, int]:
    """Best-first search keyed by (priority(node, g), node id).

    Returns the links of the route, its last node and the number of distinct
    cells whose nodes were expanded.
    """
    target_ids = {n.id for n in targets}
    best_g: Dict[str, float] = {}
    parent: Dict[str, Optional[CellLink]] = {}
    queue: List[Tuple[float, float, str]] = []
    for node in sources:
        best_g[node.id] = 0.0
        parent[node.id] = None
        f, h = priority(node.id, 0.0)
        heapq.heappush(queue, (f, h, node.id))

    closed: Set[str] = set()
    explored: Set[CellId] = set()
    nodes, outgoing = sn.nodes, sn.outgoing
    push, pop = heapq.heappush, heapq.heappop
    while queue:
        _, _, current = pop(queue)
        if current in closed:
            continue
        closed.add(current)
        explored.add(nodes[current].cell)

        if current in target_ids:
            links: List[CellLink] = []
            link = parent[current]
            while link is not None:
                links.append(link)
                link = parent[link.source]
            links.reverse()
            return links, nodes[current], len(explored)

        g = best_g[current]
        for link in outgoing.get(current, ()):
            neighbour = link.target
            if neighbour in closed:
                continue
            new_g = g + link.weight
            if neighbour in best_g and best_g[neighbour] <= new_g:
                continue
            best_g[neighbour] = new_g
            parent[neighbour] = link
            f, h = priority(neighbour, new_g)
            push(queue, (f, h, neighbour))

    raise UnreachableError(
        f"no route reaches cell {targets[0].cell} from cell {sources[0].cell}",
        explored_cells=len(explored),
    )


def _euclidean_priority(sn: SimplifiedNetwork, targets: Sequence[TerminalNode]) -> PriorityFn:
    cache: Dict[str, float] = {}

    def h(node_id: str) -> float:
        if node_id not in cache:
            x, y = sn.nodes[node_id].point
            cache[node_id] = HEURISTIC_SLACK * min(
                math.hypot(t.x - x, t.y - y) for t in targets
            )
        return cache[node_id]

    def priority(node_id: str, g: float) -> Tuple[float, float]:
        estimate = h(node_id)
        return g + estimate, estimate

    return priority


def _orientation_priority(
    sn: SimplifiedNetwork,
    origin: CellId,
    target: CellId,
    idx: OrientationIndex,
    mode: str,
    cfg: GridConfig,
) -> PriorityFn:
    cache: Dict[CellId, Tuple[float, float]] = {}

    def priority(node_id: str, g: float) -> Tuple[float, float]:
        cell = sn.nodes[node_id].cell
        if cell not in cache:
            # G is recomputed from the origin cell on every expansion
            g_cost = orientation_cost(idx, origin, cell, mode, cfg)
            h_cost = orientation_cost(idx, cell, target, mode, cfg)
            cache[cell] = (g_cost + h_cost, h_cost)
        return cache[cell]

    return priority


def route_cost(
    cells: Sequence[CellId],
    total_weight: float,
    cost: CostModel,
    idx: Optional[OrientationIndex] = None,
    cfg: Optional[GridConfig] = None,
) -> float:
    """Cost of a route in the units of the cost model."""
    if not cost.uses_orientation:
        return total_weight
    return sum(
        orientation_cost(idx, a, b, cost.mode, cfg) for a, b in zip(cells, cells[1:])
    )


def astar(
    sn: SimplifiedNetwork,
    origin: CellId,
    target: CellId,
    cost: CostModel = CostModel.EUCLIDEAN,
    idx: Optional[OrientationIndex] = None,
    cfg: Optional[GridConfig] = None,
) -> Route:
    """Find a route from any terminal node of origin to one of target.

    Args:
        sn: Simplified network to search
        origin: Cell the route starts in
        target: Cell the route ends in
        cost: Cost model; euclidean routes are minimum-weight
        idx: Orientation index, required by the orientation models
        cfg: Grid configuration used by the inverse orientation mode

    Returns:
        Route with nodes, links, traversed cells, weight and cost

    Raises:
        NoEndpointError: origin or target cell has no terminal node
        UnreachableError: no link path joins the two cells
    """
    cost = CostModel(cost)
    if cost.uses_orientation and idx is None:
        raise InvalidInputError(f"cost model {cost.value} needs an orientation index")
    cfg = cfg or GridConfig()
    sources = _endpoints(sn, origin, "origin")
    targets = _endpoints(sn, target, "target")

    if origin == target:
        start = sources[0]
        return Route((start,), (), (start.cell,), 0.0, 0.0, cost, explored_cells=1)

    if cost.uses_orientation:
        priority = _orientation_priority(sn, origin, target, idx, cost.mode, cfg)
    else:
        priority = _euclidean_priority(sn, targets)

    links, last, explored = _best_first(sn, sources, targets, priority)
    return _build_route(sn, links, last, cost, idx, cfg, explored)


def dijkstra(sn: SimplifiedNetwork, origin: CellId, target: CellId) -> Route:
    """Plain Dijkstra between the terminal nodes of two cells."""
    sources = _endpoints(sn, origin, "origin")
    targets = _endpoints(sn, target, "target")
    if origin == target:
        start = sources[0]
        return Route((start,), (), (start.cell,), 0.0, 0.0, CostModel.EUCLIDEAN, 1)
    links, last, explored = _best_first(sn, sources, targets, lambda _, g: (g, 0.0))
    return _build_route(sn, links, last, CostModel.EUCLIDEAN, None, None, explored)


def _build_route(
    sn: SimplifiedNetwork,
    links: List[CellLink],
    last: TerminalNode,
    cost: CostModel,
    idx: Optional[OrientationIndex],
    cfg: Optional[GridConfig],
    explored: int,
) -> Route:
    nodes = [last]
    if links:
        nodes = [sn.nodes[links[0].source]] + [sn.nodes[link.target] for link in links]
    total_weight = math.fsum(link.weight for link in links)
    cells = _cell_sequence(links, last)
    route = Route(
        nodes=tuple(nodes),
        links=tuple(links),
        cells=cells,
        total_weight=total_weight,
        total_cost=route_cost(cells, total_weight, cost, idx, cfg),
        cost_model=cost,
        explored_cells=explored,
    )
    logger.debug(
        "route over %d links, weight %.3f, %d cells explored",
        len(links),
        total_weight,
        explored,
    )
    return route
