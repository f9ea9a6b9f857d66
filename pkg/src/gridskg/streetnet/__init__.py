"""Street network ingestion, normalization and per-cell subnetworks."""

from gridskg.streetnet.loader import dump_network, load_network
from gridskg.streetnet.models import (
    CellSubnetwork,
    RoadClass,
    StreetNetwork,
    StreetNode,
    StreetSegment,
    segment_bearing,
)
from gridskg.streetnet.normalize import (
    NetworkPartition,
    filter_by_class,
    is_normalized,
    normalize,
    partition_network,
    subnetwork,
)

__all__ = [
    "CellSubnetwork",
    "NetworkPartition",
    "RoadClass",
    "StreetNetwork",
    "StreetNode",
    "StreetSegment",
    "dump_network",
    "filter_by_class",
    "is_normalized",
    "load_network",
    "normalize",
    "partition_network",
    "segment_bearing",
    "subnetwork",
]
