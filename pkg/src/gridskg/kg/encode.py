"""Encoders from grid, network and observation values to triples."""

import math
from datetime import datetime
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

from pydantic import BaseModel, ValidationError, field_validator
from rdflib import Literal, URIRef

from gridskg.config import GridConfig
from gridskg.grid.cells import CellId, Point, cell_bounds, cell_center, cell_of_point
from gridskg.kg.graph import Triple
from gridskg.kg.vocab import GEO, RDF, SOSA, XSD, Vocabulary
from gridskg.orientation import OrientationVector
from gridskg.simplify.links import CellLink, LinkType
from gridskg.simplify.network import SimplifiedNetwork
from gridskg.simplify.terminals import Role, TerminalNode
from gridskg.utils.error_handling import InvalidInputError, format_validation_error


def _double(value: float) -> Literal:
    # rdflib keeps xsd:double in its canonical lexical form ("0.0", "512.5"),
    # and parsing normalizes to the same form
    return Literal(float(value), datatype=XSD.double)


def _integer(value: int) -> Literal:
    return Literal(int(value), datatype=XSD.integer)


_LINK_TYPES: Dict[LinkType, Literal] = {t: Literal(t.value) for t in LinkType}
_ROLES: Dict[Role, Literal] = {r: Literal(r.value) for r in Role}


def _wkt_number(value: float) -> str:
    return f"{value:.15g}"


def cell_wkt(cell: CellId, cfg: GridConfig) -> str:
    ring = ",".join(
        f"{_wkt_number(x)} {_wkt_number(y)}" for x, y in cell_bounds(cell, cfg).ring()
    )
    return f"POLYGON(({ring}))"


def cell_to_triples(
    cell: CellId,
    cfg: GridConfig,
    vocab: Vocabulary,
    orientation: Optional[OrientationVector] = None,
) -> List[Triple]:
    subject = vocab.cell(cell)
    center_x, center_y = cell_center(cell, cfg)
    triples = [
        (subject, RDF.type, vocab.Cell),
        (subject, vocab.rowOrder, _integer(cell.row)),
        (subject, vocab.colOrder, _integer(cell.col)),
        (subject, vocab.level, _integer(cell.level)),
        (subject, vocab.centerX, _double(center_x)),
        (subject, vocab.centerY, _double(center_y)),
        (subject, GEO.asWKT, Literal(cell_wkt(cell, cfg), datatype=GEO.wktLiteral)),
    ]
    if orientation is not None:
        triples.extend(orientation_to_triples(cell, orientation, vocab))
    return triples


def orientation_to_triples(
    cell: CellId, orientation: OrientationVector, vocab: Vocabulary
) -> List[Triple]:
    subject = vocab.cell(cell)
    return [
        (subject, vocab.orientationEast, _double(orientation.east)),
        (subject, vocab.orientationNorth, _double(orientation.north)),
        (subject, vocab.orientationWest, _double(orientation.west)),
        (subject, vocab.orientationSouth, _double(orientation.south)),
    ]


class Observation(BaseModel):
    """A measured value of a property with a grid cell as feature of interest."""

    id: str
    cell: CellId
    property: str
    value: Union[float, str]
    time: datetime

    @field_validator("cell", mode="before")
    @classmethod
    def _parse_cell(cls, value: Any) -> Any:
        if isinstance(value, str):
            return CellId.parse(value)
        return value

    @classmethod
    def create(cls, **data) -> "Observation":
        """Validate, turning pydantic errors into InvalidInputError."""
        try:
            return cls(**data)
        except ValidationError as e:
            raise InvalidInputError(
                f"invalid observation: {format_validation_error(e)}"
            ) from e


def _result_literal(value: Union[float, int, str]) -> Literal:
    if isinstance(value, bool) or isinstance(value, str):
        return Literal(str(value))
    if isinstance(value, int):
        return _integer(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"observation value must be finite, got {value}")
    return _double(value)


def observation_to_triples(observation: Observation, vocab: Vocabulary) -> List[Triple]:
    if "://" not in observation.property:
        raise InvalidInputError(
            f"observed property must be an absolute IRI, got {observation.property!r}"
        )
    subject = vocab.observation(observation.id)
    time: datetime = observation.time
    return [
        (subject, RDF.type, SOSA.Observation),
        (subject, SOSA.hasFeatureOfInterest, vocab.cell(observation.cell)),
        (subject, SOSA.observedProperty, URIRef(observation.property)),
        (subject, SOSA.hasSimpleResult, _result_literal(observation.value)),
        (subject, SOSA.resultTime, Literal(time, datatype=XSD.dateTime)),
    ]


def entity_to_triples(
    entity: str, location: Point, level: int, cfg: GridConfig, vocab: Vocabulary
) -> List[Triple]:
    cell = cell_of_point(location, level, cfg)
    return [(URIRef(entity), vocab.locatedInCell, vocab.cell(cell))]


def region_to_triples(region: str, cells: Iterable[CellId], vocab: Vocabulary) -> List[Triple]:
    region_iri = URIRef(region)
    return [(vocab.cell(cell), GEO.sfWithin, region_iri) for cell in cells]


def terminal_node_to_triples(node: TerminalNode, vocab: Vocabulary) -> List[Triple]:
    subject = vocab.node(node.id)
    triples = [
        (subject, RDF.type, vocab.TerminalNode),
        (subject, vocab.nodeId, Literal(node.id)),
        (subject, vocab.x, _double(node.x)),
        (subject, vocab.y, _double(node.y)),
        (subject, vocab.inCell, vocab.cell(node.cell)),
    ]
    triples.extend((subject, vocab.role, _ROLES[role]) for role in sorted(node.roles))
    return triples


def link_to_triples(link: CellLink, vocab: Vocabulary) -> List[Triple]:
    subject = vocab.link(link.source, link.target, link.via_cell)
    return [
        (subject, RDF.type, vocab.Link),
        (subject, vocab.linkFrom, vocab.node(link.source)),
        (subject, vocab.linkTo, vocab.node(link.target)),
        (subject, vocab.linkType, _LINK_TYPES[link.link_type]),
        (subject, vocab.weight, _double(link.weight)),
        (subject, vocab.viaCell, vocab.cell(link.via_cell)),
    ]


def iter_simplified_network_triples(
    sn: SimplifiedNetwork, cfg: GridConfig, vocab: Vocabulary
) -> Iterator[Triple]:
    """Cells touched by the network, its terminal nodes and links, lazily."""
    cells = set(sn.by_cell) | {node.cell for node in sn.nodes.values()}
    for cell in sorted(cells):
        yield from cell_to_triples(cell, cfg, vocab)
    for node in sn.nodes.values():
        yield from terminal_node_to_triples(node, vocab)
    for links in sn.by_cell.values():
        for link in links:
            yield from link_to_triples(link, vocab)


def simplified_network_to_triples(
    sn: SimplifiedNetwork, cfg: GridConfig, vocab: Vocabulary
) -> List[Triple]:
    return list(iter_simplified_network_triples(sn, cfg, vocab))
