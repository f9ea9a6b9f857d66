"""
IRIs of the grid knowledge graph.

All local vocabulary lives in VOCAB_TERMS so it can be renamed in one place.
SOSA and GeoSPARQL terms use their standard namespaces.
"""

from typing import Dict
from urllib.parse import quote, unquote

from rdflib import Namespace, URIRef
from rdflib.namespace import GEO, RDF, SOSA, XSD

from gridskg.config import DEFAULT_BASE_IRI
from gridskg.grid.cells import CellId

VOCAB_TERMS = frozenset(
    {
        # classes
        "Cell",
        "TerminalNode",
        "Link",
        # cell properties
        "rowOrder",
        "colOrder",
        "level",
        "centerX",
        "centerY",
        "orientationEast",
        "orientationNorth",
        "orientationWest",
        "orientationSouth",
        # entities
        "locatedInCell",
        # terminal nodes
        "nodeId",
        "x",
        "y",
        "inCell",
        "role",
        # links
        "linkFrom",
        "linkTo",
        "linkType",
        "weight",
        "viaCell",
    }
)

_SAFE = "/:@!$&'()*+,;=-._~"

# "-" separates the parts of a link IRI, so it is escaped inside them
_LINK_SEPARATOR = "-"
_ESCAPED_SEPARATOR = "%2D"

__all__ = ["Vocabulary", "VOCAB_TERMS", "GEO", "RDF", "SOSA", "XSD"]


class Vocabulary:
    """Builds resource and vocabulary IRIs under one base IRI.

    Vocabulary terms are plain attributes (``vocab.rowOrder``); cell and node
    IRIs are memoized since a network export asks for each of them many times.
    """

    def __init__(self, base: str = DEFAULT_BASE_IRI):
        if not base.endswith(("/", "#")):
            base += "/"
        self.base = base
        self.ns = Namespace(base + "vocab/")
        for term in VOCAB_TERMS:
            setattr(self, term, self.ns[term])
        self._cells: Dict[CellId, URIRef] = {}
        self._nodes: Dict[str, URIRef] = {}
        self._link_parts: Dict[str, str] = {}

    def __getattr__(self, name: str) -> URIRef:
        # only reached for names that are not vocabulary terms
        raise AttributeError(name)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and other.base == self.base

    def __hash__(self) -> int:
        return hash(self.base)

    def cell(self, cell: CellId) -> URIRef:
        iri = self._cells.get(cell)
        if iri is None:
            iri = self._cells[cell] = URIRef(f"{self.base}id/cell/{cell}")
        return iri

    def cell_from_iri(self, iri) -> CellId:
        prefix = f"{self.base}id/cell/"
        text = str(iri)
        if not text.startswith(prefix):
            raise ValueError(f"{text} is not a cell IRI under {self.base}")
        return CellId.parse(text[len(prefix):])

    def node(self, node_id: str) -> URIRef:
        iri = self._nodes.get(node_id)
        if iri is None:
            iri = self._nodes[node_id] = URIRef(
                f"{self.base}id/node/{quote(node_id, safe=_SAFE)}"
            )
        return iri

    def node_id_from_iri(self, iri) -> str:
        return unquote(str(iri)[len(f"{self.base}id/node/"):])

    def _link_part(self, node_id: str) -> str:
        part = self._link_parts.get(node_id)
        if part is None:
            # quote() never escapes "-", so the separator is escaped by hand
            part = quote(node_id, safe=_SAFE).replace(_LINK_SEPARATOR, _ESCAPED_SEPARATOR)
            self._link_parts[node_id] = part
        return part

    def link(self, source: str, target: str, via_cell: CellId) -> URIRef:
        return URIRef(
            f"{self.base}id/link/{self._link_part(source)}{_LINK_SEPARATOR}"
            f"{self._link_part(target)}{_LINK_SEPARATOR}{via_cell}"
        )

    def observation(self, observation_id: str) -> URIRef:
        return URIRef(f"{self.base}id/observation/{quote(observation_id, safe=_SAFE)}")
