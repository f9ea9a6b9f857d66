"""
Reading and writing the canonical street-network JSON Lines format.

    {"type":"node","id":str,"x":num,"y":num}
    {"type":"edge","id":str,"from":str,"to":str,"class":str,"lanes":int?,
     "maxspeed":num?,"oneway":bool,"geometry":[[x,y],...]?}

Unknown keys are ignored. Two-way edges become two directed segments; the
reverse direction gets the id "{id}:rev".
"""

import json
import logging
from pathlib import Path
from typing import IO, Annotated, Iterable, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from gridskg.grid.cells import Point
from gridskg.streetnet.models import (
    RoadClass,
    StreetNetwork,
    StreetNode,
    StreetSegment,
    polyline_length,
    segment_bearing,
)
from gridskg.utils.error_handling import IntegrityError, ParseError, format_validation_error

logger = logging.getLogger(__name__)

REVERSE_SUFFIX = ":rev"


class NodeRecord(BaseModel):
    model_config = ConfigDict(extra="ignore")

    type: Literal["node"]
    id: str
    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)


class EdgeRecord(BaseModel):
    model_config = ConfigDict(extra="ignore", populate_by_name=True)

    type: Literal["edge"]
    id: str
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    road_class: Optional[str] = Field(None, alias="class")
    lanes: Optional[int] = Field(None, ge=1)
    maxspeed: Optional[float] = Field(None, gt=0)
    oneway: bool = False
    geometry: Optional[List[Tuple[float, float]]] = None


Record = Annotated[Union[NodeRecord, EdgeRecord], Field(discriminator="type")]
_record_adapter = TypeAdapter(Record)


def _lines(source: Union[str, Path, IO, Iterable]) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            yield from f
        return
    for line in source:
        yield line.decode("utf-8") if isinstance(line, bytes) else line


def parse_records(source) -> Iterator[Tuple[int, Union[NodeRecord, EdgeRecord]]]:
    """Yield (line number, record) pairs, skipping blank lines."""
    for line_no, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", line=line_no) from e
        try:
            yield line_no, _record_adapter.validate_python(data)
        except ValidationError as e:
            raise ParseError(format_validation_error(e), line=line_no) from e


def _full_polyline(
    geometry: Optional[List[Tuple[float, float]]], start: Point, end: Point
) -> List[Point]:
    points = [(float(x), float(y)) for x, y in (geometry or [])]
    if not points or points[0] != start:
        points.insert(0, start)
    if points[-1] != end:
        points.append(end)
    return points


def load_network(source) -> StreetNetwork:
    """Load a street network from JSON Lines.

    Args:
        source: Path, text/binary stream or iterable of lines

    Returns:
        StreetNetwork with two-way edges expanded

    Raises:
        ParseError: a line is not a valid node or edge record
        IntegrityError: an edge references a node that does not exist
    """
    nodes = {}
    edges: List[Tuple[int, EdgeRecord]] = []
    for line_no, record in parse_records(source):
        if isinstance(record, NodeRecord):
            if record.id in nodes:
                raise ParseError(f"duplicate node id {record.id!r}", line=line_no)
            nodes[record.id] = StreetNode(record.id, record.x, record.y)
        else:
            edges.append((line_no, record))

    net = StreetNetwork(nodes=nodes)
    dropped = 0
    for line_no, edge in edges:
        for node_id in (edge.source, edge.target):
            if node_id not in nodes:
                raise IntegrityError(
                    f"line {line_no}: edge {edge.id!r} references missing node "
                    f"{node_id!r}",
                    missing_id=node_id,
                )
        start, end = nodes[edge.source].point, nodes[edge.target].point
        if start == end:
            # no bearing exists for a segment that ends where it starts
            logger.warning("dropping edge %s: endpoints coincide", edge.id)
            dropped += 1
            continue

        polyline = _full_polyline(edge.geometry, start, end)
        forward = StreetSegment(
            id=edge.id,
            source=edge.source,
            target=edge.target,
            length=polyline_length(polyline),
            bearing=segment_bearing(start, end),
            lanes=edge.lanes or 1,
            maxspeed=edge.maxspeed,
            road_class=RoadClass.from_string(edge.road_class),
            geometry=tuple(polyline),
        )
        _add_segment(net, forward, line_no)
        if not edge.oneway:
            reverse_line = list(reversed(polyline))
            _add_segment(
                net,
                StreetSegment(
                    id=edge.id + REVERSE_SUFFIX,
                    source=edge.target,
                    target=edge.source,
                    length=polyline_length(reverse_line),
                    bearing=segment_bearing(end, start),
                    lanes=forward.lanes,
                    maxspeed=forward.maxspeed,
                    road_class=forward.road_class,
                    geometry=tuple(reverse_line),
                ),
                line_no,
            )

    logger.info(
        "loaded %d nodes and %d directed segments (%d edges dropped)",
        len(net.nodes),
        len(net.segments),
        dropped,
    )
    return net


def _add_segment(net: StreetNetwork, segment: StreetSegment, line_no: int):
    if segment.id in net.segments:
        raise ParseError(f"duplicate segment id {segment.id!r}", line=line_no)
    net.segments[segment.id] = segment


def dump_network(net: StreetNetwork, stream: IO[str]) -> None:
    """Write a network in canonical JSONL: nodes then edges, sorted by id."""
    for node in sorted(net.nodes.values(), key=lambda n: n.id):
        stream.write(
            json.dumps({"type": "node", "id": node.id, "x": node.x, "y": node.y}) + "\n"
        )
    for segment in sorted(net.segments.values(), key=lambda s: s.id):
        record = {
            "type": "edge",
            "id": segment.id,
            "from": segment.source,
            "to": segment.target,
            "class": segment.road_class.value,
            "lanes": segment.lanes,
            "oneway": True,
        }
        if segment.maxspeed is not None:
            record["maxspeed"] = segment.maxspeed
        if len(segment.geometry) > 2:
            record["geometry"] = [list(p) for p in segment.geometry]
        stream.write(json.dumps(record) + "\n")
