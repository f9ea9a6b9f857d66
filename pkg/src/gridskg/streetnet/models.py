"""
Street network types: directed segments between projected nodes.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from gridskg.grid.cells import CellId, Point
from gridskg.utils.error_handling import InvalidInputError


class RoadClass(str, Enum):
    MOTORWAY = "motorway"
    TRUNK = "trunk"
    PRIMARY = "primary"
    SECONDARY = "secondary"
    OTHER = "other"

    @classmethod
    def from_string(cls, name: Optional[str]) -> "RoadClass":
        """Map an OSM highway tag onto a road class; *_link maps to its parent."""
        if not name:
            return cls.OTHER
        name = name.strip().lower()
        if name.endswith("_link"):
            name = name[: -len("_link")]
        for road_class in cls:
            if road_class.value == name:
                return road_class
        return cls.OTHER


@dataclass(frozen=True)
class StreetNode:
    id: str
    x: float
    y: float

    @property
    def point(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True)
class StreetSegment:
    """One direction of travel; a two-way street is two segments.

    `geometry` always holds the full polyline, endpoints included.
    """

    id: str
    source: str
    target: str
    length: float
    bearing: float
    lanes: int = 1
    maxspeed: Optional[float] = None
    road_class: RoadClass = RoadClass.OTHER
    geometry: Tuple[Point, ...] = ()


def segment_bearing(a: Point, b: Point) -> float:
    """Compass bearing of a→b in degrees, 0 = grid north, 90 = east."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx == 0 and dy == 0:
        raise InvalidInputError(f"bearing undefined for coincident points {a!r}")
    bearing = math.degrees(math.atan2(dx, dy)) % 360.0
    # x % 360 can round up to 360.0 for tiny negative angles
    return 0.0 if bearing >= 360.0 else bearing


def polyline_length(points: Iterable[Point]) -> float:
    points = list(points)
    return math.fsum(math.dist(p, q) for p, q in zip(points, points[1:]))


@dataclass
class StreetNetwork:
    """Nodes and directed segments keyed by id.

    Treated as immutable once built; every transformation returns a new
    network.
    """

    nodes: Dict[str, StreetNode] = field(default_factory=dict)
    segments: Dict[str, StreetSegment] = field(default_factory=dict)

    def point(self, node_id: str) -> Point:
        return self.nodes[node_id].point

    def polyline(self, segment: StreetSegment) -> List[Point]:
        if segment.geometry:
            return list(segment.geometry)
        return [self.point(segment.source), self.point(segment.target)]

    def total_length(self) -> float:
        return math.fsum(s.length for s in self.segments.values())


@dataclass(frozen=True)
class CellSubnetwork:
    """Nodes located in a cell and the segments leaving from them."""

    cell: CellId
    nodes: Tuple[str, ...] = ()
    segments: Tuple[StreetSegment, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.nodes
