"""Rebuild domain values from a triple graph using plain triple patterns."""

import logging
from typing import Dict, List

from rdflib import Literal, URIRef

from gridskg.grid.cells import CellId
from gridskg.kg.graph import TripleGraph
from gridskg.kg.vocab import GEO, RDF
from gridskg.orientation import OrientationVector
from gridskg.routing.cost import OrientationIndex
from gridskg.simplify.links import CellLink, LinkType
from gridskg.simplify.network import SimplifiedNetwork
from gridskg.simplify.terminals import Role, TerminalNode
from gridskg.utils.error_handling import DataIntegrityError, InvalidInputError

logger = logging.getLogger(__name__)


def _required(g: TripleGraph, subject: URIRef, predicate: URIRef, kind: str):
    value = g.value(subject, predicate)
    if value is None:
        short = str(predicate).rsplit("/", 1)[-1].rsplit("#", 1)[-1]
        raise DataIntegrityError(
            f"{kind} {subject} has no {short} triple", subject=str(subject)
        )
    return value


def _float(value, subject: URIRef) -> float:
    if not isinstance(value, Literal):
        raise DataIntegrityError(
            f"{subject}: expected a numeric literal, got {value}", subject=str(subject)
        )
    try:
        return float(value.toPython())
    except (TypeError, ValueError) as e:
        raise DataIntegrityError(
            f"{subject}: {value!r} is not a number", subject=str(subject)
        ) from e


def _cell(g: TripleGraph, iri, subject: URIRef) -> CellId:
    try:
        return g.vocab.cell_from_iri(iri)
    except (ValueError, InvalidInputError) as e:
        raise DataIntegrityError(f"{subject}: {e}", subject=str(subject)) from e


def _load_nodes(g: TripleGraph) -> Dict[str, TerminalNode]:
    vocab = g.vocab
    nodes: Dict[str, TerminalNode] = {}
    for subject in g.subjects_of_type(vocab.TerminalNode):
        node_id = str(_required(g, subject, vocab.nodeId, "terminal node"))
        roles = set()
        for _, _, role in g.match(subject, vocab.role, None):
            try:
                roles.add(Role(str(role)))
            except ValueError as e:
                raise DataIntegrityError(
                    f"{subject}: unknown role {role}", subject=str(subject)
                ) from e
        nodes[node_id] = TerminalNode(
            id=node_id,
            cell=_cell(g, _required(g, subject, vocab.inCell, "terminal node"), subject),
            x=_float(_required(g, subject, vocab.x, "terminal node"), subject),
            y=_float(_required(g, subject, vocab.y, "terminal node"), subject),
            roles=frozenset(roles),
        )
    return nodes


def load_simplified_network(g: TripleGraph) -> SimplifiedNetwork:
    """Reconstruct the simplified network stored by simplified_network_to_triples.

    Raises:
        DataIntegrityError: A link or terminal node lacks a required
            predicate, or a link refers to an undeclared terminal node
    """
    vocab = g.vocab
    nodes = _load_nodes(g)
    links: List[CellLink] = []
    for subject in g.subjects_of_type(vocab.Link):
        source = vocab.node_id_from_iri(_required(g, subject, vocab.linkFrom, "link"))
        target = vocab.node_id_from_iri(_required(g, subject, vocab.linkTo, "link"))
        link_type = _required(g, subject, vocab.linkType, "link")
        weight = _float(_required(g, subject, vocab.weight, "link"), subject)
        via_cell = _cell(g, _required(g, subject, vocab.viaCell, "link"), subject)
        for node_id in (source, target):
            if node_id not in nodes:
                raise DataIntegrityError(
                    f"link {subject} refers to undeclared terminal node {node_id}",
                    subject=str(subject),
                )
        try:
            link_type = LinkType(str(link_type))
        except ValueError as e:
            raise DataIntegrityError(
                f"link {subject} has unknown link type {link_type}", subject=str(subject)
            ) from e
        links.append(CellLink(source, target, link_type, weight, via_cell))

    logger.debug("loaded %d terminal nodes and %d links", len(nodes), len(links))
    return SimplifiedNetwork.from_parts(nodes, links)


def load_orientation_index(g: TripleGraph) -> OrientationIndex:
    """Orientation vectors of every cell carrying orientation predicates."""
    vocab = g.vocab
    vectors: Dict[CellId, OrientationVector] = {}
    for subject, _, _ in g.match(None, vocab.orientationEast, None):
        vectors[_cell(g, subject, subject)] = OrientationVector(
            east=_float(_required(g, subject, vocab.orientationEast, "cell"), subject),
            west=_float(_required(g, subject, vocab.orientationWest, "cell"), subject),
            north=_float(_required(g, subject, vocab.orientationNorth, "cell"), subject),
            south=_float(_required(g, subject, vocab.orientationSouth, "cell"), subject),
        )
    return OrientationIndex(vectors)


def entities_in_region(g: TripleGraph, region: str) -> List[URIRef]:
    """Entities located in a cell that lies within the region."""
    vocab = g.vocab
    found = set()
    for cell, _, _ in g.match(None, GEO.sfWithin, URIRef(region)):
        found.update(entity for entity, _, _ in g.match(None, vocab.locatedInCell, cell))
    return sorted(found, key=str)


def regions_of_entity(g: TripleGraph, entity: str) -> List[URIRef]:
    """Regions containing any cell the entity is located in."""
    vocab = g.vocab
    found = set()
    for _, _, cell in g.match(URIRef(entity), vocab.locatedInCell, None):
        found.update(region for _, _, region in g.match(cell, GEO.sfWithin, None))
    return sorted(found, key=str)


def count_by_type(g: TripleGraph, rdf_type: URIRef) -> int:
    return len(g.match(None, RDF.type, rdf_type))


def link_type_counts(g: TripleGraph) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for _, _, value in g.match(None, g.vocab.linkType, None):
        counts[str(value)] = counts.get(str(value), 0) + 1
    return dict(sorted(counts.items()))

