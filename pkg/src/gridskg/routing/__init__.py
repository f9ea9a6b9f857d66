"""Routing over the simplified network."""

from gridskg.routing.astar import Route, astar, dijkstra, route_cost
from gridskg.routing.cost import (
    CostModel,
    OrientationIndex,
    direction_components,
    orientation_cost,
)
from gridskg.routing.export import route_to_feature_collection, route_to_geojson

__all__ = [
    "CostModel",
    "OrientationIndex",
    "Route",
    "astar",
    "dijkstra",
    "direction_components",
    "orientation_cost",
    "route_cost",
    "route_to_feature_collection",
    "route_to_geojson",
]
