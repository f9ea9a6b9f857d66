"""GeoJSON export of routes for map viewers."""

from typing import List

import geojson

from gridskg.config import GridConfig
from gridskg.grid.cells import cell_bounds
from gridskg.routing.astar import Route


def route_to_feature_collection(route: Route, cfg: GridConfig) -> geojson.FeatureCollection:
    """The route as a LineString plus one Polygon per traversed cell.

    A route without links is exported as a single Point.
    """
    if route.is_empty:
        node = route.nodes[0]
        return geojson.FeatureCollection(
            [
                geojson.Feature(
                    geometry=geojson.Point((node.x, node.y)),
                    properties={
                        "kind": "route",
                        "node": node.id,
                        "cell": str(node.cell),
                        "total_weight": route.total_weight,
                        "total_cost": route.total_cost,
                        "cost_model": route.cost_model.value,
                    },
                )
            ]
        )

    features: List[geojson.Feature] = [
        geojson.Feature(
            geometry=geojson.LineString([(n.x, n.y) for n in route.nodes]),
            properties={
                "kind": "route",
                "nodes": route.node_ids,
                "link_types": [link.link_type.value for link in route.links],
                "weights": [link.weight for link in route.links],
                "total_weight": route.total_weight,
                "total_cost": route.total_cost,
                "cost_model": route.cost_model.value,
            },
        )
    ]
    for order, cell in enumerate(route.cells):
        features.append(
            geojson.Feature(
                geometry=geojson.Polygon([cell_bounds(cell, cfg).ring()]),
                properties={
                    "kind": "cell",
                    "cell": str(cell),
                    "order": order,
                    "weight": sum(
                        link.weight for link in route.links if link.via_cell == cell
                    ),
                },
            )
        )
    return geojson.FeatureCollection(features)


def route_to_geojson(route: Route, cfg: GridConfig) -> bytes:
    collection = route_to_feature_collection(route, cfg)
    return (geojson.dumps(collection, sort_keys=True) + "\n").encode("utf-8")
