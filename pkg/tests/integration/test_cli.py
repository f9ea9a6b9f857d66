"""
End-to-end runs of the command-line tool on small fixture networks.
"""

import csv
import json

import pytest

from gridskg.cli import build_parser, main
from tests.conftest import corridor_lines, edge_line, node_line, parallel_lines

pytestmark = pytest.mark.integration

RADIATION = "http://example.org/property/radiation"


def run(capsys, *argv):
    """Run the CLI and return its exit code and JSON summary."""
    code = main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def corridor_file(write_lines):
    return write_lines("corridor.jsonl", corridor_lines())


@pytest.fixture
def normalized_corridor(corridor_file, capsys):
    code, _ = run(capsys, "ingest", corridor_file)
    assert code == 0
    return corridor_file.with_name("corridor.normalized.jsonl")


@pytest.fixture
def corridor_kg(normalized_corridor, tmp_path, capsys):
    code, summary = run(capsys, "simplify", normalized_corridor, "--out", tmp_path / "build")
    assert code == 0
    return tmp_path / "build" / "kg.nt"


class TestIngest:
    def test_corridor(self, corridor_file, tmp_path, capsys):
        """Test that ingest splits segments at cell borders."""
        out = tmp_path / "normalized.jsonl"
        code, summary = run(capsys, "ingest", corridor_file, "--out", out)
        assert code == 0
        assert summary["nodes"] == 5
        assert summary["segments"] == 8
        assert summary["input_segments"] == 4
        assert summary["split_segments"] == 4
        assert out.exists()

    def test_default_output_name(self, normalized_corridor):
        assert normalized_corridor.exists()

    def test_three_two_way_edges(self, write_lines, capsys):
        path = write_lines(
            "square.jsonl",
            [
                node_line("p", 100, 100),
                node_line("q", 900, 100),
                node_line("r", 900, 900),
                node_line("s", 100, 900),
                edge_line("pq", "p", "q"),
                edge_line("qr", "q", "r"),
                edge_line("rs", "r", "s"),
            ],
        )
        code, summary = run(capsys, "ingest", path)
        assert code == 0
        assert summary["input_segments"] == 6
        assert summary["segments"] == 6

    def test_malformed_line(self, write_lines, capsys):
        """Test that a malformed record reports its line number."""
        path = write_lines("broken.jsonl", corridor_lines() + [node_line("z", 1, 1), "{bad"])
        code, summary = run(capsys, "ingest", path)
        assert code == 2
        assert summary["line"] == 7
        assert "line 7" in summary["error"]
        assert summary["error_type"] == "parse_error"

    def test_empty_file(self, write_lines, capsys):
        code, summary = run(capsys, "ingest", write_lines("empty.jsonl", []))
        assert code == 0
        assert (summary["nodes"], summary["segments"]) == (0, 0)

    def test_class_filter(self, corridor_file, capsys):
        code, summary = run(capsys, "ingest", corridor_file, "--classes", "motorway")
        assert code == 0
        assert summary["filtered_segments"] == 4
        assert summary["segments"] == 0

    def test_missing_file(self, tmp_path, capsys):
        code, summary = run(capsys, "ingest", tmp_path / "absent.jsonl")
        assert code == 2
        assert summary["error_type"] == "io_error"


class TestOrient:
    def test_rejects_unnormalized_input(self, corridor_file, capsys):
        code, summary = run(capsys, "orient", corridor_file)
        assert code == 2
        assert "not normalized" in summary["error"]

    def test_level_one_csv(self, normalized_corridor, tmp_path, capsys):
        """Test the per-cell indicators of the corridor."""
        out = tmp_path / "orientation.csv"
        code, summary = run(capsys, "orient", normalized_corridor, "--out", out)
        assert code == 0
        assert summary["cells"] == 3
        assert summary["total"] == {"east": 2000.0, "north": 0.0, "west": 2000.0, "south": 0.0}
        with open(out, newline="") as f:
            rows = list(csv.DictReader(f))
        assert [(r["cell_id"], float(r["east"]), float(r["west"])) for r in rows] == [
            ("L1.0.0", 500.0, 0.0),
            ("L1.0.1", 1000.0, 1000.0),
            ("L1.0.2", 500.0, 1000.0),
        ]

    def test_level_two_aggregates(self, normalized_corridor, tmp_path, capsys):
        out = tmp_path / "orientation-l2.csv"
        code, summary = run(capsys, "orient", normalized_corridor, "--level", "2", "--out", out)
        assert code == 0
        assert summary["level"] == 2
        assert out.read_text().splitlines()[1] == "L2.0.0,2000.0,0.0,2000.0,0.0"

    def test_empty_network(self, write_lines, tmp_path, capsys):
        path = write_lines("empty.jsonl", [])
        out = tmp_path / "empty.csv"
        code, summary = run(capsys, "orient", path, "--out", out)
        assert code == 0
        assert summary["cells"] == 0
        assert out.read_text() == "cell_id,east,north,west,south\n"

    def test_emit_kg(self, normalized_corridor, tmp_path, capsys):
        kg = tmp_path / "orientation.nt"
        code, summary = run(
            capsys, "orient", normalized_corridor, "--out", tmp_path / "o.csv", "--emit-kg", "--kg", kg
        )
        assert code == 0
        # seven cell triples and four indicators per cell
        assert summary["kg_triples_added"] == 33
        code, stats = run(capsys, "stats", "--kg", kg)
        assert stats["cells_with_orientation"] == 3


class TestSimplify:
    def test_corridor_counts(self, normalized_corridor, tmp_path, capsys):
        """Test the link counts of the three-cell corridor."""
        out = tmp_path / "build"
        code, summary = run(capsys, "simplify", normalized_corridor, "--out", out)
        assert code == 0
        assert summary["terminal_nodes"] == 4
        assert summary["links"] == 10
        assert summary["link_types"] == {"cross-E": 2, "cross-W": 2, "intra": 6}
        assert summary["per_cell"]["L1.0.1"]["terminal_nodes"] == 2
        assert summary["triples"] == 109
        assert (out / "links.csv").exists()
        assert json.loads((out / "network.geojson").read_text())["type"] == "FeatureCollection"

    def test_rerun_is_byte_identical(self, normalized_corridor, tmp_path, capsys):
        first, second = tmp_path / "first.nt", tmp_path / "second.nt"
        run(capsys, "simplify", normalized_corridor, "--out", tmp_path, "--kg", first)
        run(capsys, "simplify", normalized_corridor, "--out", tmp_path, "--kg", second)
        assert first.read_bytes() == second.read_bytes()

    def test_worker_threads(self, normalized_corridor, tmp_path, capsys):
        one, four = tmp_path / "one.nt", tmp_path / "four.nt"
        run(capsys, "simplify", normalized_corridor, "--out", tmp_path, "--kg", one)
        run(capsys, "simplify", normalized_corridor, "--out", tmp_path, "--kg", four, "--workers", "4")
        assert one.read_bytes() == four.read_bytes()

    def test_empty_network(self, write_lines, tmp_path, capsys):
        path = write_lines("empty.jsonl", [])
        code, summary = run(capsys, "simplify", path, "--out", tmp_path / "build")
        assert code == 0
        assert summary["links"] == 0
        assert (tmp_path / "build" / "kg.nt").read_bytes() == b""


class TestRoute:
    def test_corridor(self, corridor_kg, tmp_path, capsys):
        """Test the euclidean route across the corridor."""
        out = tmp_path / "route.geojson"
        code, summary = run(
            capsys, "route", "--kg", corridor_kg, "--from", "L1.0.0", "--to", "L1.0.2", "--out", out
        )
        assert code == 0
        assert summary["total_weight"] == 1500.0
        assert summary["cells"] == ["L1.0.0", "L1.0.1", "L1.0.2"]
        assert summary["links"] == 3
        assert json.loads(out.read_text())["type"] == "FeatureCollection"

    def test_default_output_next_to_kg(self, corridor_kg, capsys):
        code, summary = run(capsys, "route", "--kg", corridor_kg, "--from", "L1.0.0", "--to", "L1.0.2")
        assert code == 0
        expected = corridor_kg.with_name("route.geojson")
        assert summary["output"] == str(expected)
        features = json.loads(expected.read_text())["features"]
        assert [f["properties"]["kind"] for f in features] == ["route", "cell", "cell", "cell"]

    def test_excluded_middle_cell_is_unreachable(self, corridor_kg, capsys):
        code, summary = run(
            capsys,
            "route",
            "--kg",
            corridor_kg,
            "--from",
            "L1.0.0",
            "--to",
            "L1.0.2",
            "--exclude",
            "L1.0.1",
        )
        assert code == 3
        assert summary["error_type"] == "unreachable"
        assert summary["explored_cells"] == 1

    def test_same_cell(self, corridor_kg, capsys):
        code, summary = run(capsys, "route", "--kg", corridor_kg, "--from", "L1.0.1", "--to", "L1.0.1")
        assert code == 0
        assert summary["total_weight"] == 0.0
        assert summary["links"] == 0

    def test_unknown_cell(self, corridor_kg, capsys):
        code, summary = run(capsys, "route", "--kg", corridor_kg, "--from", "L1.0.0", "--to", "L1.7.7")
        assert code == 2
        assert summary["error_type"] == "no_endpoint"

    def test_malformed_cell_id(self, corridor_kg, capsys):
        code, summary = run(capsys, "route", "--kg", corridor_kg, "--from", "0.0", "--to", "L1.0.1")
        assert code == 2
        assert summary["error_type"] == "invalid_input"

    def test_orientation_cost(self, normalized_corridor, corridor_kg, tmp_path, capsys):
        run(
            capsys,
            "orient",
            normalized_corridor,
            "--out",
            tmp_path / "o.csv",
            "--emit-kg",
            "--kg",
            corridor_kg,
        )
        code, summary = run(
            capsys,
            "route",
            "--kg",
            corridor_kg,
            "--from",
            "L1.0.0",
            "--to",
            "L1.0.2",
            "--cost",
            "orientation-raw",
        )
        assert code == 0
        assert summary["total_cost"] == 3000.0
        assert summary["total_weight"] == 1500.0


class TestScenario:
    @pytest.fixture
    def parallel_kg(self, write_lines, tmp_path, capsys):
        path = write_lines("parallel.jsonl", parallel_lines())
        run(capsys, "ingest", path)
        normalized = path.with_name("parallel.normalized.jsonl")
        run(capsys, "simplify", normalized, "--out", tmp_path / "parallel")
        return tmp_path / "parallel" / "kg.nt"

    def test_critical_cells(self, parallel_kg, capsys):
        """Test that losing the middle cell only lengthens the route."""
        code, summary = run(capsys, "scenario", "--kg", parallel_kg, "--from", "L1.0.0", "--to", "L1.0.2")
        assert code == 0
        assert summary["baseline_weight"] == 1500.0
        assert summary["impacts"] == [
            {"cell": "L1.0.1", "weight": 4000.0, "delta": 2500.0, "unreachable": False}
        ]

    def test_excluded_detour_cell(self, parallel_kg, capsys):
        code, summary = run(
            capsys,
            "scenario",
            "--kg",
            parallel_kg,
            "--from",
            "L1.0.0",
            "--to",
            "L1.0.2",
            "--exclude",
            "L1.1.1",
        )
        assert code == 0
        assert summary["excluded_cells"] == ["L1.1.1"]
        assert summary["impacts"][0]["unreachable"] is True


class TestObserve:
    def write_csv(self, tmp_path, rows):
        path = tmp_path / "observations.csv"
        path.write_text("".join(row + "\n" for row in rows), encoding="utf-8")
        return path

    def test_one_row(self, tmp_path, capsys):
        """Test that one observation adds the five SOSA triples."""
        path = self.write_csv(
            tmp_path,
            ["cell_id,property_iri,value,timestamp", f"L1.62.466,{RADIATION},42.0,2024-01-01T00:00:00Z"],
        )
        kg = tmp_path / "kg.nt"
        code, summary = run(capsys, "observe", path, "--kg", kg)
        assert code == 0
        assert summary["observations"] == 1
        assert summary["triples_added"] == 5
        assert kg.exists()

    def test_duplicate_observation(self, tmp_path, capsys):
        row = f"L1.0.0,{RADIATION},1.5,2024-01-01T00:00:00Z"
        kg = tmp_path / "kg.nt"
        code, summary = run(capsys, "observe", self.write_csv(tmp_path, [row, row]), "--kg", kg)
        assert code == 2
        assert summary["line"] == 2
        assert not kg.exists()

    def test_bad_timestamp(self, tmp_path, capsys):
        path = self.write_csv(tmp_path, [f"L1.0.0,{RADIATION},1.5,yesterday"])
        code, summary = run(capsys, "observe", path, "--kg", tmp_path / "kg.nt")
        assert code == 2
        assert summary["line"] == 1

    def test_empty_csv(self, tmp_path, capsys):
        kg = tmp_path / "kg.nt"
        code, summary = run(capsys, "observe", self.write_csv(tmp_path, []), "--kg", kg)
        assert code == 0
        assert summary["triples_added"] == 0
        assert not kg.exists()

    def test_appends_to_existing_kg(self, corridor_kg, tmp_path, capsys):
        path = self.write_csv(tmp_path, [f"L1.0.1,{RADIATION},3,2024-01-02T12:00:00Z,obs-1"])
        run(capsys, "observe", path, "--kg", corridor_kg)
        code, stats = run(capsys, "stats", "--kg", corridor_kg)
        assert stats["observations"] == 1
        assert stats["links"] == 10


class TestAnnotate:
    def test_entities_and_regions(self, tmp_path, capsys):
        """Test placing an entity and a region on the grid."""
        entities = tmp_path / "entities.csv"
        entities.write_text("iri,x,y\nhttp://example.org/entity/hospital,466100,62900\n")
        regions = tmp_path / "regions.geojson"
        regions.write_text(
            json.dumps(
                {
                    "type": "FeatureCollection",
                    "features": [
                        {
                            "type": "Feature",
                            "properties": {"iri": "http://example.org/region/district"},
                            "geometry": {
                                "type": "Polygon",
                                "coordinates": [
                                    [[0, 0], [2000, 0], [2000, 2000], [0, 2000], [0, 0]]
                                ],
                            },
                        }
                    ],
                }
            )
        )
        kg = tmp_path / "kg.nt"
        code, summary = run(
            capsys, "annotate", "--entities", entities, "--regions", regions, "--kg", kg
        )
        assert code == 0
        assert summary["entities"] == 1
        assert summary["regions"] == 1
        assert summary["region_cells"] == 4
        assert summary["triples_added"] == 5
        assert "L1.62.466" in kg.read_text()

    def test_needs_an_input(self, tmp_path, capsys):
        code, summary = run(capsys, "annotate", "--kg", tmp_path / "kg.nt")
        assert code == 2

    def test_region_without_iri(self, tmp_path, capsys):
        regions = tmp_path / "regions.geojson"
        regions.write_text(
            json.dumps(
                {
                    "type": "Feature",
                    "properties": {},
                    "geometry": {
                        "type": "Polygon",
                        "coordinates": [[[0, 0], [900, 0], [900, 900], [0, 0]]],
                    },
                }
            )
        )
        code, summary = run(capsys, "annotate", "--regions", regions, "--kg", tmp_path / "kg.nt")
        assert code == 2


class TestStats:
    def test_corridor(self, corridor_kg, capsys):
        code, summary = run(capsys, "stats", "--kg", corridor_kg)
        assert code == 0
        assert summary["triples"] == 109
        assert summary["cells"] == 3
        assert summary["terminal_nodes"] == 4
        assert summary["links"] == 10
        assert summary["memory_mb"] > 0

    def test_missing_kg(self, tmp_path, capsys):
        code, summary = run(capsys, "stats", "--kg", tmp_path / "absent.nt")
        assert code == 2


class TestParser:
    def test_route_requires_cells(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["route", "--kg", "kg.nt"])

    def test_cost_choices(self):
        args = build_parser().parse_args(
            ["route", "--from", "L1.0.0", "--to", "L1.0.1", "--cost", "orientation-inverse"]
        )
        assert args.cost == "orientation-inverse"
        assert args.buffer == 0
