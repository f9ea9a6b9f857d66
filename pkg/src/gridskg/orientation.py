"""
Network orientation indicators.

A segment of length L, compass bearing B and weight W contributes
L·W·|sin B| lane-meters to east or west (by the sign of sin B) and
L·W·|cos B| to north or south (by the sign of cos B). Cell values are sums
over the cell subnetwork and region values are sums over member cells.
"""

import csv
import math
from dataclasses import dataclass
from typing import IO, Dict, Iterable, Mapping, Tuple

from gridskg.config import GridConfig, OrientationWeights
from gridskg.grid.cells import CellId, ancestor_at
from gridskg.streetnet.models import CellSubnetwork, StreetNetwork, StreetSegment
from gridskg.streetnet.normalize import partition_network

CSV_HEADER = ("cell_id", "east", "north", "west", "south")


@dataclass(frozen=True)
class OrientationVector:
    east: float = 0.0
    west: float = 0.0
    north: float = 0.0
    south: float = 0.0

    def __add__(self, other: "OrientationVector") -> "OrientationVector":
        return OrientationVector(
            self.east + other.east,
            self.west + other.west,
            self.north + other.north,
            self.south + other.south,
        )

    def component(self, direction: str) -> float:
        """Value for a direction letter N, S, E or W."""
        return {
            "E": self.east,
            "W": self.west,
            "N": self.north,
            "S": self.south,
        }[getattr(direction, "value", direction)]

    def as_row(self) -> Tuple[float, float, float, float]:
        return (self.east, self.north, self.west, self.south)


ZERO = OrientationVector()


def _sin_cos(bearing: float) -> Tuple[float, float]:
    # exact values on the axes so axis-aligned streets have no spill-over
    quarter, rest = divmod(bearing, 90.0)
    if rest == 0.0:
        return {0: (0.0, 1.0), 1: (1.0, 0.0), 2: (0.0, -1.0), 3: (-1.0, 0.0)}[
            int(quarter) % 4
        ]
    rad = math.radians(bearing)
    return math.sin(rad), math.cos(rad)


def segment_weight(segment: StreetSegment, weights: OrientationWeights) -> float:
    weight = float(segment.lanes)
    if weights.use_speed_factor and segment.maxspeed is not None:
        weight *= segment.maxspeed / weights.reference_speed
    return weight


def segment_orientation(
    segment: StreetSegment, weights: OrientationWeights = OrientationWeights()
) -> OrientationVector:
    sin_b, cos_b = _sin_cos(segment.bearing)
    scale = segment.length * segment_weight(segment, weights)
    return OrientationVector(
        east=scale * max(sin_b, 0.0),
        west=scale * max(-sin_b, 0.0),
        north=scale * max(cos_b, 0.0),
        south=scale * max(-cos_b, 0.0),
    )


def cell_orientation(
    sub: CellSubnetwork, weights: OrientationWeights = OrientationWeights()
) -> OrientationVector:
    """Sum over the subnetwork's segments in ascending id order."""
    total = ZERO
    for segment in sorted(sub.segments, key=lambda s: s.id):
        total = total + segment_orientation(segment, weights)
    return total


def aggregate_orientation(vectors: Iterable[OrientationVector]) -> OrientationVector:
    total = ZERO
    for vector in vectors:
        total = total + vector
    return total


def orientation_by_cell(
    net: StreetNetwork,
    cfg: GridConfig,
    level: int = 1,
    weights: OrientationWeights = OrientationWeights(),
) -> Dict[CellId, OrientationVector]:
    """Orientation of every non-empty cell of a normalized network."""
    partition = partition_network(net, cfg, level)
    return {
        cell: cell_orientation(sub, weights)
        for cell, sub in sorted(partition.cells.items())
    }


def aggregate_to_level(
    index: Mapping[CellId, OrientationVector], cfg: GridConfig, level: int
) -> Dict[CellId, OrientationVector]:
    """Lift per-cell values to a coarser level by summing over descendants."""
    grouped: Dict[CellId, list] = {}
    for cell in sorted(index):
        grouped.setdefault(ancestor_at(cell, level, cfg), []).append(index[cell])
    return {cell: aggregate_orientation(vectors) for cell, vectors in sorted(grouped.items())}


def write_orientation_csv(index: Mapping[CellId, OrientationVector], stream: IO[str]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for cell in sorted(index):
        writer.writerow([str(cell), *(repr(v) for v in index[cell].as_row())])
