import json

import pytest

from gridskg.config import (
    DEFAULT_BASE_IRI,
    MAJOR_ROAD_CLASSES,
    GridConfig,
    RunConfig,
    get_config,
)
from gridskg.utils.error_handling import InvalidInputError

pytestmark = pytest.mark.unit


class TestGridConfig:
    def test_defaults(self):
        """Test the default 1 km grid."""
        cfg = GridConfig()
        assert (cfg.origin_x, cfg.origin_y) == (0.0, 0.0)
        assert cfg.edge_length(1) == 1000.0
        assert cfg.edge_length(3) == 100000.0

    def test_invalid_level(self):
        """Test that level 0 has no edge length."""
        with pytest.raises(InvalidInputError):
            GridConfig().edge_length(0)

    def test_cell_size_must_be_positive(self):
        """Test validation of the cell size."""
        with pytest.raises(InvalidInputError):
            RunConfig.from_dict({"cell_size": 0})


class TestRunConfig:
    def test_defaults(self):
        """Test the defaults used without any configuration source."""
        config = RunConfig()
        assert config.road_classes == MAJOR_ROAD_CLASSES
        assert config.kg_base_iri == DEFAULT_BASE_IRI
        assert config.level == 1
        assert config.workers == 1

    def test_config_from_env(self, monkeypatch):
        """Test loading config from environment variables."""
        monkeypatch.setenv("GRIDSKG_BASE_IRI", "http://example.org/env")
        monkeypatch.setenv("GRIDSKG_LEVEL", "2")
        monkeypatch.setenv("GRIDSKG_CLASSES", "motorway, trunk")

        config = RunConfig.from_env()

        # base IRIs always end with a separator
        assert config.kg_base_iri == "http://example.org/env/"
        assert config.level == 2
        assert config.road_classes == frozenset({"motorway", "trunk"})

    def test_config_from_file(self, temp_config_file):
        """Test loading config from a file with grid keys at the top level."""
        config = RunConfig.load_from_file(temp_config_file)

        assert config.grid.cell_size == 1000
        assert config.road_classes == frozenset({"primary", "secondary"})
        assert config.kg_base_iri == "http://example.org/test/"

    def test_missing_file(self, tmp_path):
        """Test that a missing config file is reported."""
        with pytest.raises(FileNotFoundError):
            RunConfig.load_from_file(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        """Test that a broken config file is an input error."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InvalidInputError):
            RunConfig.load_from_file(path)

    def test_unknown_road_class(self):
        """Test that road classes are validated."""
        with pytest.raises(InvalidInputError):
            RunConfig.from_dict({"road_classes": ["footway"]})

    def test_relative_base_iri(self):
        """Test that the base IRI must be absolute."""
        with pytest.raises(InvalidInputError):
            RunConfig.from_dict({"kg_base_iri": "gridskg/"})

    def test_save_config_to_file(self, tmp_path):
        """Test saving config to a file and reading it back."""
        config = RunConfig.from_dict(
            {"grid": {"origin_x": 400000, "cell_size": 500}, "level": 2, "workers": 4}
        )

        config_path = tmp_path / "nested" / "config.json"
        config.save_to_file(config_path)

        # road classes are written as a sorted list
        data = json.loads(config_path.read_text())
        assert data["road_classes"] == sorted(MAJOR_ROAD_CLASSES)

        loaded = RunConfig.load_from_file(config_path)
        assert loaded == config

    def test_merged_ignores_none(self):
        """Test that unset overrides keep the current values."""
        config = RunConfig(level=3).merged({"level": None, "workers": 2})
        assert config.level == 3
        assert config.workers == 2


class TestGetConfig:
    def test_precedence(self, temp_config_file, monkeypatch):
        """Test defaults < file < environment < flags."""
        monkeypatch.setenv("GRIDSKG_LEVEL", "2")
        monkeypatch.setenv("GRIDSKG_BASE_IRI", "http://example.org/env/")

        config = get_config(temp_config_file, {"level": 3})

        assert config.level == 3
        assert config.kg_base_iri == "http://example.org/env/"
        assert config.road_classes == frozenset({"primary", "secondary"})

    def test_without_file(self):
        """Test that defaults are used when no file is given."""
        assert get_config() == RunConfig()
