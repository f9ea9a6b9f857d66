"""
Command-line entry point.

    gridskg ingest network.jsonl --out normalized.jsonl
    gridskg simplify normalized.jsonl --out build/
    gridskg orient normalized.jsonl --out build/orientation.csv --emit-kg --kg build/kg.nt
    gridskg observe observations.csv --kg build/kg.nt
    gridskg route --kg build/kg.nt --from L1.0.0 --to L1.0.2 --cost euclidean

Every command prints one JSON summary to standard output and logs to
standard error. Exit codes: 0 success, 2 input or integrity error,
3 unreachable target.
"""

import argparse
import csv
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set

import geojson
import psutil
from shapely.geometry import shape

from gridskg import __version__
from gridskg.config import RunConfig, get_config
from gridskg.grid.cells import CellId
from gridskg.grid.coverage import cells_covering
from gridskg.kg.decode import (
    count_by_type,
    link_type_counts,
    load_orientation_index,
    load_simplified_network,
)
from gridskg.kg.encode import (
    Observation,
    cell_to_triples,
    entity_to_triples,
    observation_to_triples,
    iter_simplified_network_triples,
    region_to_triples,
)
from gridskg.kg.graph import Triple, TripleGraph, write_ntriples
from gridskg.kg.vocab import RDF, SOSA, Vocabulary
from gridskg.orientation import (
    aggregate_orientation,
    aggregate_to_level,
    orientation_by_cell,
    write_orientation_csv,
)
from gridskg.routing.astar import astar
from gridskg.routing.cost import CostModel
from gridskg.routing.export import route_to_geojson
from gridskg.scenario import critical_cells, excluded_cells
from gridskg.simplify.network import (
    build_simplified_network,
    network_to_geojson,
    remove_cells,
    write_links_csv,
)
from gridskg.streetnet.loader import dump_network, load_network
from gridskg.streetnet.models import RoadClass, StreetNetwork
from gridskg.streetnet.normalize import (
    filter_by_class,
    is_normalized,
    normalize,
    partition_network,
)
from gridskg.summaries import (
    AnnotateSummary,
    CellImpactSummary,
    CellStats,
    ErrorSummary,
    IngestSummary,
    ObserveSummary,
    OrientSummary,
    RouteSummary,
    ScenarioSummary,
    SimplifySummary,
    StatsSummary,
)
from gridskg.utils import tracing
from gridskg.utils.error_handling import (
    EXIT_OK,
    InvalidInputError,
    ParseError,
    handle_error,
)
from gridskg.utils.logging import log_exception, setup_logger

logger = logging.getLogger("gridskg.cli")

DEFAULT_KG = "kg.nt"
DEFAULT_ROUTE = "route.geojson"


# -- shared helpers -------------------------------------------------------


def _emit(summary) -> None:
    sys.stdout.write(summary.model_dump_json(indent=2) + "\n")
    sys.stdout.flush()


def _kg_format(path: Path) -> str:
    return "turtle" if path.suffix.lower() in (".ttl", ".turtle") else "ntriples"


def _read_kg(path: Path, vocab: Vocabulary, missing_ok: bool = False) -> TripleGraph:
    if not path.exists():
        if missing_ok:
            return TripleGraph(vocab=vocab)
        raise FileNotFoundError(f"KG file not found: {path}")
    with tracing.trace("kg.parse", {"path": str(path)}):
        return TripleGraph.parse(path.read_bytes(), _kg_format(path), vocab)


def _write_kg(graph: TripleGraph, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with tracing.trace("kg.serialize", {"path": str(path), "triples": len(graph)}):
        path.write_bytes(graph.serialize(_kg_format(path)))


def _export_kg(triples: Iterable[Triple], vocab: Vocabulary, path: Path) -> int:
    """Write a new KG file; N-Triples are streamed without building a graph."""
    if _kg_format(path) != "ntriples":
        graph = TripleGraph(triples, vocab)
        _write_kg(graph, path)
        return len(graph)
    path.parent.mkdir(parents=True, exist_ok=True)
    with tracing.trace("kg.export", {"path": str(path)}):
        with open(path, "wb") as f:
            return write_ntriples(triples, f)


def _kg_path(args: argparse.Namespace, default: Optional[Path] = None) -> Path:
    if args.kg:
        return Path(args.kg)
    return default or Path(DEFAULT_KG)


def _parse_cells(text: Optional[str]) -> List[CellId]:
    if not text:
        return []
    return [CellId.parse(part) for part in text.split(",") if part.strip()]


def _load_normalized(path: Path, config: RunConfig) -> StreetNetwork:
    with tracing.trace("streetnet.load", {"path": str(path)}):
        net = load_network(path)
    if not is_normalized(net, config.grid, 1):
        raise InvalidInputError(
            f"{path} is not normalized: a segment crosses more than one cell border "
            "(run `gridskg ingest` first)"
        )
    return net


def _read_csv_rows(path: Path, header_first_field: str):
    """Yield (line number, row) pairs, skipping blank lines and a header row."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or not any(field.strip() for field in row):
                continue
            if line_no == 1 and row[0].strip().lower() == header_first_field:
                continue
            yield line_no, [field.strip() for field in row]


# -- commands ----------------------------------------------------------------


def cmd_ingest(args: argparse.Namespace, config: RunConfig) -> IngestSummary:
    """Load, filter by road class and normalize a street network."""
    source = Path(args.network)
    with tracing.trace("streetnet.load", {"path": str(source)}):
        net = load_network(source)
    filtered = filter_by_class(net, config.road_classes)
    with tracing.trace("streetnet.normalize", {"segments": len(filtered.segments)}):
        normalized = normalize(filtered, config.grid, level=1)

    output = Path(args.out) if args.out else source.with_suffix(".normalized.jsonl")
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8") as f:
        dump_network(normalized, f)

    return IngestSummary(
        nodes=len(normalized.nodes),
        segments=len(normalized.segments),
        input_segments=len(net.segments),
        split_segments=sum(1 for sid in filtered.segments if sid not in normalized.segments),
        filtered_segments=len(net.segments) - len(filtered.segments),
        output=str(output),
    )


def cmd_orient(args: argparse.Namespace, config: RunConfig) -> OrientSummary:
    """Orientation indicators per cell, optionally appended to the KG."""
    source = Path(args.network)
    net = _load_normalized(source, config)
    with tracing.trace("orientation", {"level": config.level}):
        index = orientation_by_cell(net, config.grid, 1, config.orientation)
        if config.level > 1:
            index = aggregate_to_level(index, config.grid, config.level)

    output = Path(args.out) if args.out else source.with_suffix(".orientation.csv")
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8", newline="") as f:
        write_orientation_csv(index, f)

    added = 0
    if args.emit_kg:
        vocab = Vocabulary(config.kg_base_iri)
        kg_path = _kg_path(args)
        graph = _read_kg(kg_path, vocab, missing_ok=True)
        before = len(graph)
        for cell, vector in index.items():
            graph.add_all(cell_to_triples(cell, config.grid, vocab, vector))
        added = len(graph) - before
        _write_kg(graph, kg_path)

    total = aggregate_orientation(index.values())
    return OrientSummary(
        level=config.level,
        cells=len(index),
        total={
            "east": total.east,
            "north": total.north,
            "west": total.west,
            "south": total.south,
        },
        output=str(output),
        kg_triples_added=added,
    )


def cmd_simplify(args: argparse.Namespace, config: RunConfig) -> SimplifySummary:
    """Build the simplified network and write links CSV, GeoJSON and KG."""
    source = Path(args.network)
    net = _load_normalized(source, config)
    with tracing.trace("simplify", {"level": config.level, "workers": config.workers}):
        partition = partition_network(net, config.grid, config.level)
        sn = build_simplified_network(partition, workers=config.workers)

    out_dir = Path(args.out) if args.out else source.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    links_csv = out_dir / "links.csv"
    with open(links_csv, "w", encoding="utf-8", newline="") as f:
        write_links_csv(sn, f)
    with open(out_dir / "network.geojson", "w", encoding="utf-8") as f:
        f.write(geojson.dumps(network_to_geojson(sn), sort_keys=True) + "\n")

    vocab = Vocabulary(config.kg_base_iri)
    kg_path = _kg_path(args, out_dir / DEFAULT_KG)
    triple_count = _export_kg(
        iter_simplified_network_triples(sn, config.grid, vocab), vocab, kg_path
    )

    link_types: Dict[str, int] = {}
    for link in sn.links:
        link_types[link.link_type.value] = link_types.get(link.link_type.value, 0) + 1
    per_cell = {
        str(cell): CellStats(
            terminal_nodes=len(sn.terminal_nodes_of(cell)),
            links=len(sn.by_cell.get(cell, ())),
        )
        for cell in sorted(set(partition.cells) | set(sn.by_cell))
    }
    return SimplifySummary(
        level=config.level,
        cells=len(partition.cells),
        terminal_nodes=len(sn.nodes),
        links=len(sn.links),
        link_types=dict(sorted(link_types.items())),
        per_cell=per_cell,
        triples=triple_count,
        links_csv=str(links_csv),
        kg=str(kg_path),
    )


def _observation_id(cell: str, prop: str, timestamp: str) -> str:
    digest = hashlib.sha1(f"{cell}|{prop}|{timestamp}".encode("utf-8")).hexdigest()
    return digest[:16]


def _observation_value(text: str) -> Any:
    try:
        return float(text)
    except ValueError:
        return text


def cmd_observe(args: argparse.Namespace, config: RunConfig) -> ObserveSummary:
    """Append SOSA observations from a CSV to the KG."""
    vocab = Vocabulary(config.kg_base_iri)
    kg_path = _kg_path(args)
    graph = _read_kg(kg_path, vocab, missing_ok=True)
    before = len(graph)

    seen: Set[str] = set()
    count = 0
    for line_no, row in _read_csv_rows(Path(args.observations), "cell_id"):
        if len(row) not in (4, 5):
            raise ParseError(
                f"expected cell_id,property_iri,value,timestamp[,id], got {len(row)} fields",
                line=line_no,
            )
        cell_text, prop, value, timestamp = row[:4]
        obs_id = row[4] if len(row) == 5 and row[4] else _observation_id(
            cell_text, prop, timestamp
        )
        try:
            observation = Observation.create(
                id=obs_id,
                cell=cell_text,
                property=prop,
                value=_observation_value(value),
                time=timestamp,
            )
            triples = observation_to_triples(observation, vocab)
        except InvalidInputError as e:
            raise ParseError(str(e), line=line_no) from e

        subject = triples[0][0]
        if str(subject) in seen or graph.match(subject, RDF.type, SOSA.Observation):
            raise ParseError(f"duplicate observation {subject}", line=line_no)
        seen.add(str(subject))
        graph.add_all(triples)
        count += 1

    if count:
        _write_kg(graph, kg_path)
    return ObserveSummary(
        observations=count, triples_added=len(graph) - before, kg=str(kg_path)
    )


def _region_iri(feature: Dict[str, Any], position: int) -> str:
    properties = feature.get("properties") or {}
    iri = properties.get("iri") or feature.get("id")
    if not iri or "://" not in str(iri):
        raise InvalidInputError(
            f"region feature {position} needs an absolute IRI in properties.iri or id"
        )
    return str(iri)


def cmd_annotate(args: argparse.Namespace, config: RunConfig) -> AnnotateSummary:
    """Place entities and regions on grid cells in the KG."""
    if not args.entities and not args.regions:
        raise InvalidInputError("annotate needs --entities and/or --regions")
    vocab = Vocabulary(config.kg_base_iri)
    kg_path = _kg_path(args)
    graph = _read_kg(kg_path, vocab, missing_ok=True)
    before = len(graph)
    summary = AnnotateSummary(kg=str(kg_path))

    if args.entities:
        for line_no, row in _read_csv_rows(Path(args.entities), "iri"):
            if len(row) != 3:
                raise ParseError(f"expected iri,x,y, got {len(row)} fields", line=line_no)
            try:
                point = (float(row[1]), float(row[2]))
                graph.add_all(
                    entity_to_triples(row[0], point, config.level, config.grid, vocab)
                )
            except ValueError as e:
                raise ParseError(str(e), line=line_no) from e
            summary.entities += 1

    if args.regions:
        with open(args.regions, "r", encoding="utf-8") as f:
            try:
                collection = geojson.load(f)
            except json.JSONDecodeError as e:
                raise ParseError(
                    f"regions file is not valid GeoJSON: {e.msg}", line=e.lineno
                ) from e
        features = collection.get("features", [collection])
        for position, feature in enumerate(features):
            iri = _region_iri(feature, position)
            geometry = shape(feature["geometry"])
            parts = list(getattr(geometry, "geoms", [geometry]))
            cells = sorted(
                {cell for part in parts for cell in cells_covering(part, config.level, config.grid)}
            )
            graph.add_all(region_to_triples(iri, cells, vocab))
            summary.regions += 1
            summary.region_cells += len(cells)

    summary.triples_added = len(graph) - before
    _write_kg(graph, kg_path)
    return summary


def _exclusions(args: argparse.Namespace) -> Set[CellId]:
    return excluded_cells(_parse_cells(args.exclude), args.buffer)


def cmd_route(args: argparse.Namespace, config: RunConfig) -> RouteSummary:
    """Route between two cells over the network stored in the KG."""
    vocab = Vocabulary(config.kg_base_iri)
    kg_path = _kg_path(args)
    graph = _read_kg(kg_path, vocab)
    origin, target = CellId.parse(args.origin), CellId.parse(args.target)
    cost = CostModel.from_string(args.cost)

    sn = load_simplified_network(graph)
    idx = load_orientation_index(graph) if cost.uses_orientation else None
    excluded = _exclusions(args)
    if excluded:
        sn = remove_cells(sn, excluded)
        logger.info("excluded %d cells", len(excluded))

    started = time.perf_counter()
    with tracing.trace("route", {"from": str(origin), "to": str(target), "cost": cost.value}):
        route = astar(sn, origin, target, cost, idx, config.grid)
    wall_time_ms = (time.perf_counter() - started) * 1000.0

    output = Path(args.out) if args.out else kg_path.with_name(DEFAULT_ROUTE)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_bytes(route_to_geojson(route, config.grid))

    return RouteSummary(
        origin=str(origin),
        target=str(target),
        cost_model=cost.value,
        total_weight=route.total_weight,
        total_cost=route.total_cost,
        links=len(route.links),
        cells=[str(c) for c in route.cells],
        explored_cells=route.explored_cells,
        excluded_cells=[str(c) for c in sorted(excluded)],
        wall_time_ms=round(wall_time_ms, 3),
        output=str(output),
    )


def cmd_scenario(args: argparse.Namespace, config: RunConfig) -> ScenarioSummary:
    """Report which cells of the optimal route are critical."""
    vocab = Vocabulary(config.kg_base_iri)
    graph = _read_kg(_kg_path(args), vocab)
    origin, target = CellId.parse(args.origin), CellId.parse(args.target)
    sn = load_simplified_network(graph)
    excluded = _exclusions(args)

    with tracing.trace("scenario", {"from": str(origin), "to": str(target)}):
        impacts = critical_cells(sn, origin, target, excluded)
    baseline = impacts[0].baseline_weight if impacts else (
        astar(remove_cells(sn, excluded), origin, target).total_weight
    )
    return ScenarioSummary(
        origin=str(origin),
        target=str(target),
        baseline_weight=baseline,
        excluded_cells=[str(c) for c in sorted(excluded)],
        impacts=[
            CellImpactSummary(
                cell=str(i.cell), weight=i.weight, delta=i.delta, unreachable=i.unreachable
            )
            for i in impacts
        ],
    )


def cmd_stats(args: argparse.Namespace, config: RunConfig) -> StatsSummary:
    """Counts of what the KG holds."""
    vocab = Vocabulary(config.kg_base_iri)
    graph = _read_kg(_kg_path(args), vocab)
    links = link_type_counts(graph)
    return StatsSummary(
        triples=len(graph),
        cells=count_by_type(graph, vocab.Cell),
        terminal_nodes=count_by_type(graph, vocab.TerminalNode),
        links=count_by_type(graph, vocab.Link),
        link_types=links,
        observations=count_by_type(graph, SOSA.Observation),
        cells_with_orientation=len(load_orientation_index(graph)),
        memory_mb=round(psutil.Process().memory_info().rss / (1024 * 1024), 1),
    )


COMMANDS = {
    "ingest": cmd_ingest,
    "orient": cmd_orient,
    "simplify": cmd_simplify,
    "observe": cmd_observe,
    "annotate": cmd_annotate,
    "route": cmd_route,
    "scenario": cmd_scenario,
    "stats": cmd_stats,
}


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--level", type=int, help="grid level (>= 1)")
    common.add_argument(
        "--classes", help="comma separated road classes to keep, or 'all'"
    )
    common.add_argument("--kg", help="knowledge graph file (.nt or .ttl)")
    common.add_argument("--out", help="output file or directory")
    common.add_argument("--base-iri", dest="base_iri", help="base IRI of the KG")
    common.add_argument("--workers", type=int, help="threads for per-cell work")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ERROR")

    parser = argparse.ArgumentParser(
        prog="gridskg",
        description="Grid-based spatial knowledge graphs of street networks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", parents=[common], help="normalize a street network")
    ingest.add_argument("network", help="street network JSON Lines")

    orient = commands.add_parser("orient", parents=[common], help="orientation indicators")
    orient.add_argument("network", help="normalized street network JSON Lines")
    orient.add_argument(
        "--emit-kg", action="store_true", help="append orientation triples to --kg"
    )

    simplify = commands.add_parser("simplify", parents=[common], help="build cell links")
    simplify.add_argument("network", help="normalized street network JSON Lines")

    observe = commands.add_parser("observe", parents=[common], help="add observations")
    observe.add_argument(
        "observations", help="CSV: cell_id,property_iri,value,timestamp[,id]"
    )

    annotate = commands.add_parser(
        "annotate", parents=[common], help="map entities and regions to cells"
    )
    annotate.add_argument("--entities", help="CSV: iri,x,y")
    annotate.add_argument("--regions", help="GeoJSON polygons with an iri property")

    for name, help_text in (("route", "route between two cells"), ("scenario", "critical cells")):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("--from", dest="origin", required=True, help="origin cell id")
        sub.add_argument("--to", dest="target", required=True, help="target cell id")
        sub.add_argument("--exclude", help="comma separated cell ids to remove")
        sub.add_argument(
            "--buffer", type=int, default=0, help="widen exclusions by N cells"
        )
        if name == "route":
            sub.add_argument(
                "--cost",
                default=CostModel.EUCLIDEAN.value,
                choices=[m.value for m in CostModel],
                help="cost model",
            )

    commands.add_parser("stats", parents=[common], help="summarize a KG file")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    classes = args.classes
    if classes and classes.strip().lower() == "all":
        classes = [c.value for c in RoadClass]
    return {
        "level": args.level,
        "road_classes": classes,
        "kg_base_iri": args.base_iri,
        "log_level": args.log_level,
        "workers": args.workers,
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logger("gridskg", args.log_level or "INFO")

    try:
        config = get_config(Path(args.config) if args.config else None, _overrides(args))
        setup_logger("gridskg", config.log_level)
        tracing.TRACE_PATH = config.trace_file
        with tracing.trace(f"cli.{args.command}"):
            summary = COMMANDS[args.command](args, config)
    except Exception as e:
        report = handle_error(e)
        if report.exit_code == 1:
            log_exception(logger, f"gridskg {args.command} failed")
        else:
            logger.error("%s", report.message)
        _emit(
            ErrorSummary(
                error=report.message,
                error_type=report.error_type,
                exit_code=report.exit_code,
                line=getattr(e, "line", None),
                explored_cells=getattr(e, "explored_cells", None),
            )
        )
        return report.exit_code

    _emit(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
