import json
import random
import sys
from pathlib import Path

import pytest

# Add the src directory to the Python path
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from gridskg.config import GridConfig  # noqa: E402
from gridskg.simplify.network import build_simplified_network  # noqa: E402
from gridskg.streetnet.loader import load_network  # noqa: E402
from gridskg.streetnet.normalize import normalize, partition_network  # noqa: E402


def node_line(node_id, x, y):
    return json.dumps({"type": "node", "id": node_id, "x": x, "y": y})


def edge_line(edge_id, source, target, oneway=False, lanes=1, road_class="primary", **extra):
    record = {
        "type": "edge",
        "id": edge_id,
        "from": source,
        "to": target,
        "class": road_class,
        "lanes": lanes,
        "oneway": oneway,
    }
    record.update(extra)
    return json.dumps(record)


def corridor_lines():
    """Three cells in a row joined by two two-way streets along y = 500."""
    return [
        node_line("a", 500.0, 500.0),
        node_line("b", 1500.0, 500.0),
        node_line("c", 2500.0, 500.0),
        edge_line("e1", "a", "b"),
        edge_line("e2", "b", "c"),
    ]


def parallel_lines():
    """The corridor plus a detour one row to the north, joined at a and c."""
    return corridor_lines() + [
        node_line("d", 500.0, 1500.0),
        node_line("e", 1500.0, 1500.0),
        node_line("f", 2500.0, 1500.0),
        edge_line("d1", "a", "d"),
        edge_line("d2", "d", "e"),
        edge_line("d3", "e", "f"),
        edge_line("d4", "f", "c"),
    ]


def lattice_lines(seed, size=8, oneway_share=0.2, diagonal_share=0.1):
    """Perturbed lattice with one node per cell and streets to its neighbours.

    Nodes stay clear of the cell borders. A share of the streets is one-way
    and a share of the diagonal neighbours is joined as well, so corner
    regions and multi-border crossings are exercised.
    """
    rng = random.Random(seed)
    lines = []
    for row in range(size):
        for col in range(size):
            x = col * 1000.0 + rng.uniform(150.0, 850.0)
            y = row * 1000.0 + rng.uniform(150.0, 850.0)
            lines.append(node_line(f"n{row}_{col}", x, y))

    count = 0
    for row in range(size):
        for col in range(size):
            neighbours = [(row, col + 1), (row + 1, col)]
            if rng.random() < diagonal_share:
                neighbours.append((row + 1, col + 1))
            for n_row, n_col in neighbours:
                if n_row >= size or n_col >= size:
                    continue
                source, target = f"n{row}_{col}", f"n{n_row}_{n_col}"
                oneway = rng.random() < oneway_share
                if oneway and rng.random() < 0.5:
                    source, target = target, source
                lines.append(
                    edge_line(
                        f"s{count}", source, target, oneway=oneway, lanes=rng.randint(1, 4)
                    )
                )
                count += 1
    return lines


@pytest.fixture
def grid_cfg():
    """Default grid: origin (0, 0), 1 km cells, factor 10."""
    return GridConfig()


@pytest.fixture
def corridor_net():
    return load_network(corridor_lines())


@pytest.fixture
def corridor_partition(corridor_net, grid_cfg):
    return partition_network(normalize(corridor_net, grid_cfg), grid_cfg, 1)


@pytest.fixture
def corridor_sn(corridor_partition):
    return build_simplified_network(corridor_partition)


@pytest.fixture
def parallel_sn(grid_cfg):
    net = normalize(load_network(parallel_lines()), grid_cfg)
    return build_simplified_network(partition_network(net, grid_cfg, 1))


@pytest.fixture
def make_lattice():
    """Factory returning the JSONL lines of a random lattice network."""
    return lattice_lines


@pytest.fixture
def write_lines(tmp_path):
    """Write lines to a file under tmp_path and return its path."""

    def _write(name, lines):
        path = tmp_path / name
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def temp_config_file(tmp_path):
    """Create a temporary config file for testing."""
    config_path = tmp_path / "config.json"
    config_content = """
    {
        "origin_x": 0,
        "origin_y": 0,
        "cell_size": 1000,
        "level_factor": 10,
        "road_classes": ["primary", "secondary"],
        "level": 1,
        "kg_base_iri": "http://example.org/test/"
    }
    """
    config_path.write_text(config_content)
    return config_path


@pytest.fixture(autouse=True)
def clean_gridskg_env(monkeypatch):
    """Keep GRIDSKG_* variables from the developer's shell out of tests."""
    for name in (
        "GRIDSKG_BASE_IRI",
        "GRIDSKG_LEVEL",
        "GRIDSKG_CLASSES",
        "GRIDSKG_LOG_LEVEL",
        "GRIDSKG_TRACE_FILE",
    ):
        monkeypatch.delenv(name, raising=False)
