"""
Crisis scenarios: what happens to a route when cells are taken out.

An impacted area is a set of cells, optionally widened by a buffer of
neighbouring cells. Critical cells are the intermediate cells of the optimal
route whose loss lengthens the route or cuts it.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Set

from gridskg.grid.cells import CellId, buffer_cells
from gridskg.routing.astar import astar
from gridskg.simplify.network import SimplifiedNetwork, remove_cells
from gridskg.utils.error_handling import UnreachableError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CellImpact:
    cell: CellId
    baseline_weight: float
    weight: Optional[float]

    @property
    def unreachable(self) -> bool:
        return self.weight is None

    @property
    def delta(self) -> Optional[float]:
        return None if self.weight is None else self.weight - self.baseline_weight

    def severity_key(self):
        return (0 if self.unreachable else 1, -(self.delta or 0.0), self.cell)


def excluded_cells(cells: Iterable[CellId], buffer: int = 0) -> Set[CellId]:
    """Impacted cells plus every cell within `buffer` of them."""
    return set(buffer_cells(cells, buffer))


def critical_cells(
    sn: SimplifiedNetwork,
    origin: CellId,
    target: CellId,
    excluded: Iterable[CellId] = (),
) -> List[CellImpact]:
    """Re-route around each intermediate cell of the optimal route.

    Args:
        sn: Simplified network, before any exclusion
        origin: Route origin cell
        target: Route target cell
        excluded: Cells already removed from the network

    Returns:
        One CellImpact per intermediate cell, unreachable first, then by
        decreasing weight increase

    Raises:
        NoEndpointError: origin or target has no terminal node
        UnreachableError: the baseline route already fails
    """
    network = remove_cells(sn, excluded)
    baseline = astar(network, origin, target)
    impacts = []
    for cell in baseline.cells:
        if cell in (origin, target):
            continue
        try:
            weight: Optional[float] = astar(
                remove_cells(network, [cell]), origin, target
            ).total_weight
        except UnreachableError:
            weight = None
        impacts.append(CellImpact(cell, baseline.total_weight, weight))
    logger.info(
        "checked %d route cells, %d cut the route",
        len(impacts),
        sum(1 for i in impacts if i.unreachable),
    )
    return sorted(impacts, key=CellImpact.severity_key)
