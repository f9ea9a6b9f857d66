"""
In-memory triple graph with pattern matching and a row/column range index.

Backed by an rdflib Graph; blank nodes are rejected everywhere so that
canonical N-Triples (sorted, de-duplicated lines) identify a graph up to
byte equality.
"""

import logging
import re
from bisect import bisect_left, bisect_right
from typing import IO, Dict, Iterable, Iterator, List, Optional, Tuple

import rdflib
from rdflib import BNode, Literal, URIRef
from rdflib.plugins.serializers.nt import _quoteLiteral
from rdflib.term import Node

from gridskg.grid.cells import CellRange
from gridskg.kg.vocab import GEO, RDF, SOSA, XSD, Vocabulary
from gridskg.utils.error_handling import ParseError, UnsupportedFeatureError

logger = logging.getLogger(__name__)

Triple = Tuple[URIRef, URIRef, Node]

FORMATS = {"ntriples": "nt", "nt": "nt", "turtle": "turtle", "ttl": "turtle"}

_NT_BLANK_NODE = re.compile(r"^\s*_:|\s_:\S+\s*\.\s*$")

# lines per write() when exporting
_WRITE_CHUNK = 50_000


def check_triple(triple: Triple) -> Triple:
    """Return the triple if it can be stored; raise otherwise."""
    s, p, o = triple
    if isinstance(s, BNode) or isinstance(o, BNode):
        raise UnsupportedFeatureError(f"blank nodes are not supported: {triple!r}")
    if not isinstance(s, URIRef) or not isinstance(p, URIRef):
        raise ValueError(f"subject and predicate must be IRIs: {triple!r}")
    if not isinstance(o, (URIRef, Literal)):
        raise ValueError(f"object must be an IRI or literal: {triple!r}")
    return triple


def ntriples_lines(triples: Iterable[Triple]) -> List[str]:
    """Canonical N-Triples lines: one per distinct triple, sorted.

    IRIs repeat across triples, so their N-Triples form is computed once per
    IRI. Literals use rdflib's N-Triples quoting.
    """
    iris: Dict[URIRef, str] = {}

    def iri_text(term: URIRef) -> str:
        text = iris.get(term)
        if text is None:
            text = iris[term] = term.n3()
        return text

    lines = set()
    for triple in triples:
        s, p, o = check_triple(triple)
        o_text = _quoteLiteral(o) if isinstance(o, Literal) else iri_text(o)
        lines.add(f"{iri_text(s)} {iri_text(p)} {o_text} .\n")
    return sorted(lines)


def write_ntriples(triples: Iterable[Triple], stream: IO[bytes]) -> int:
    """Write canonical N-Triples without building a graph.

    Returns:
        Number of distinct triples written
    """
    lines = ntriples_lines(triples)
    for start in range(0, len(lines), _WRITE_CHUNK):
        stream.write("".join(lines[start : start + _WRITE_CHUNK]).encode("utf-8"))
    return len(lines)


class _RowIndex:
    """Sorted rows, each with sorted (col, subject) pairs."""

    def __init__(self, entries: Dict[int, List[Tuple[int, str]]]):
        self.rows = sorted(entries)
        self.cols: Dict[int, List[int]] = {}
        self.subjects: Dict[int, List[str]] = {}
        for row, items in entries.items():
            items.sort()
            self.cols[row] = [c for c, _ in items]
            self.subjects[row] = [s for _, s in items]


class TripleGraph:
    def __init__(self, triples: Iterable[Triple] = (), vocab: Optional[Vocabulary] = None):
        self.vocab = vocab or Vocabulary()
        self._graph = rdflib.Graph()
        self._graph.bind("gsk", self.vocab.ns)
        self._graph.bind("sosa", SOSA)
        self._graph.bind("geo", GEO)
        self._index: Optional[Dict[Optional[int], _RowIndex]] = None
        # index rows and entries visited by cells_by_range, for instrumentation
        self.scanned = 0
        self.add_all(triples)

    # -- mutation --------------------------------------------------------

    def add(self, triple: Triple) -> None:
        self._graph.add(check_triple(triple))
        self._index = None

    def add_all(self, triples: Iterable[Triple]) -> None:
        """Validate every triple, then load them in one batch."""
        checked = [check_triple(triple) for triple in triples]
        if not checked:
            return
        graph = self._graph
        graph.addN((s, p, o, graph) for s, p, o in checked)
        self._index = None

    def update(self, other: "TripleGraph") -> None:
        self.add_all(other)

    # -- set protocol ----------------------------------------------------

    def __len__(self) -> int:
        return len(self._graph)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._graph)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._graph

    def __eq__(self, other) -> bool:
        if not isinstance(other, TripleGraph):
            return NotImplemented
        return set(self._graph) == set(other._graph)

    __hash__ = None

    # -- queries ---------------------------------------------------------

    def match(
        self,
        s: Optional[URIRef] = None,
        p: Optional[URIRef] = None,
        o: Optional[Node] = None,
    ) -> List[Triple]:
        """Triples matching the bound positions, in canonical order."""
        return sorted(
            self._graph.triples((s, p, o)), key=lambda t: tuple(x.n3() for x in t)
        )

    def value(self, s: URIRef, p: URIRef) -> Optional[Node]:
        """Single object of (s, p, ?) or None; the smallest if several."""
        objects = sorted(self._graph.objects(s, p), key=lambda o: o.n3())
        return objects[0] if objects else None

    def subjects_of_type(self, rdf_type: URIRef) -> List[URIRef]:
        return sorted(self._graph.subjects(RDF.type, rdf_type), key=str)

    def _ensure_index(self) -> Dict[Optional[int], _RowIndex]:
        if self._index is not None:
            return self._index
        entries: Dict[Optional[int], Dict[int, List[Tuple[int, str]]]] = {}
        for subject, _, row in self._graph.triples((None, self.vocab.rowOrder, None)):
            col = self._graph.value(subject, self.vocab.colOrder)
            level = self._graph.value(subject, self.vocab.level)
            try:
                row_value, col_value = int(row), int(col)
                level_value = int(level) if level is not None else None
            except (TypeError, ValueError):
                logger.warning("skipping %s in range index: non-integer order", subject)
                continue
            entries.setdefault(level_value, {}).setdefault(row_value, []).append(
                (col_value, str(subject))
            )
        self._index = {level: _RowIndex(rows) for level, rows in entries.items()}
        return self._index

    def cells_by_range(self, r: CellRange, level: Optional[int] = None) -> List[URIRef]:
        """Cell IRIs whose row/col orders fall in the inclusive range.

        Bisects to the stored rows of the range, then to the columns of each
        row. ``scanned`` grows by one per stored row visited plus one per
        matching entry.
        """
        index = self._ensure_index()
        if level is not None:
            levels = [level] if level in index else []
        else:
            levels = sorted(index, key=lambda lv: (lv is None, lv or 0))
        result: List[URIRef] = []
        for lv in levels:
            rows = index[lv]
            lo = bisect_left(rows.rows, r.row_min)
            hi = bisect_right(rows.rows, r.row_max)
            for row in rows.rows[lo:hi]:
                cols = rows.cols[row]
                a = bisect_left(cols, r.col_min)
                b = bisect_right(cols, r.col_max)
                self.scanned += 1 + (b - a)
                result.extend(URIRef(s) for s in rows.subjects[row][a:b])
        return result

    # -- serialization ---------------------------------------------------

    def serialize(self, format: str = "ntriples") -> bytes:
        fmt = _rdflib_format(format)
        if fmt == "nt":
            return "".join(ntriples_lines(self._graph)).encode("utf-8")
        return self._graph.serialize(format=fmt, encoding="utf-8")

    @classmethod
    def parse(
        cls, data, format: str = "ntriples", vocab: Optional[Vocabulary] = None
    ) -> "TripleGraph":
        """Parse N-Triples or Turtle; blank nodes raise UnsupportedFeatureError."""
        fmt = _rdflib_format(format)
        if isinstance(data, bytes):
            try:
                data = data.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(f"input is not UTF-8: {e}") from e

        if fmt == "nt":
            for line_no, line in enumerate(data.splitlines(), start=1):
                if _NT_BLANK_NODE.search(line):
                    raise UnsupportedFeatureError("blank node encountered", line=line_no)

        scratch = rdflib.Graph()
        try:
            scratch.parse(data=data, format=fmt)
        except Exception as e:  # rdflib raises parser-specific exception types
            raise ParseError(_describe_syntax_error(e), line=_error_line(e, data, fmt)) from e

        for triple in scratch:
            if any(isinstance(term, BNode) for term in triple):
                raise UnsupportedFeatureError("blank node encountered")
        return cls(scratch, vocab=vocab)
def _rdflib_format(format: str) -> str:
    try:
        return FORMATS[format.lower()]
    except KeyError:
        raise ValueError(f"unsupported RDF format {format!r}") from None


def _describe_syntax_error(error: Exception) -> str:
    message = str(error).strip().splitlines()
    return f"RDF syntax error: {message[0] if message else type(error).__name__}"


def _error_line(error: Exception, data: str, fmt: str) -> Optional[int]:
    line = getattr(error, "lines", None)
    if isinstance(line, int):
        return line + 1 if fmt == "turtle" else line
    if fmt != "nt":
        return None
    # N-Triples is line based: find the first line that fails on its own
    for line_no, text in enumerate(data.splitlines(), start=1):
        if not text.strip() or text.lstrip().startswith("#"):
            continue
        try:
            rdflib.Graph().parse(data=text + "\n", format="nt")
        except Exception:
            return line_no
    return None


# Module-level forms of the graph operations.


def match(g: TripleGraph, s=None, p=None, o=None) -> List[Triple]:
    return g.match(s, p, o)


def cells_by_range(g: TripleGraph, r: CellRange, level: Optional[int] = None) -> List[URIRef]:
    return g.cells_by_range(r, level)


def serialize(g: TripleGraph, format: str = "ntriples") -> bytes:
    return g.serialize(format)


def parse(data, format: str = "ntriples", vocab: Optional[Vocabulary] = None) -> TripleGraph:
    return TripleGraph.parse(data, format, vocab)


__all__ = [
    "TripleGraph",
    "Triple",
    "check_triple",
    "ntriples_lines",
    "write_ntriples",
    "match",
    "cells_by_range",
    "serialize",
    "parse",
    "XSD",
]
