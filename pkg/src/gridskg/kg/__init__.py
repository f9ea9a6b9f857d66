"""RDF encoding of the grid, the simplified network and observations."""

from gridskg.kg.decode import (
    entities_in_region,
    load_orientation_index,
    load_simplified_network,
    regions_of_entity,
)
from gridskg.kg.encode import (
    Observation,
    cell_to_triples,
    entity_to_triples,
    iter_simplified_network_triples,
    link_to_triples,
    observation_to_triples,
    orientation_to_triples,
    region_to_triples,
    simplified_network_to_triples,
    terminal_node_to_triples,
)
from gridskg.kg.graph import (
    TripleGraph,
    cells_by_range,
    match,
    parse,
    serialize,
    write_ntriples,
)
from gridskg.kg.vocab import VOCAB_TERMS, Vocabulary

__all__ = [
    "Observation",
    "TripleGraph",
    "VOCAB_TERMS",
    "Vocabulary",
    "cell_to_triples",
    "cells_by_range",
    "entities_in_region",
    "entity_to_triples",
    "iter_simplified_network_triples",
    "link_to_triples",
    "load_orientation_index",
    "load_simplified_network",
    "match",
    "observation_to_triples",
    "orientation_to_triples",
    "parse",
    "region_to_triples",
    "regions_of_entity",
    "serialize",
    "simplified_network_to_triples",
    "terminal_node_to_triples",
    "write_ntriples",
]
