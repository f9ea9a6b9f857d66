import json
import os
from pathlib import Path
from typing import Any, Dict, FrozenSet, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from gridskg.utils.error_handling import InvalidInputError, format_validation_error

# Load environment variables from .env file
load_dotenv()

DEFAULT_BASE_IRI = "http://example.org/gridskg/"
MAJOR_ROAD_CLASSES = frozenset({"motorway", "trunk", "primary", "secondary"})


class GridConfig(BaseModel):
    """Square grid anchored at a projected origin, 1 km cells by default."""

    model_config = ConfigDict(frozen=True)

    origin_x: float = 0.0
    origin_y: float = 0.0
    cell_size: float = Field(1000.0, gt=0)
    level_factor: int = Field(10, ge=2)
    crs_label: str = "EPSG:31287"

    def edge_length(self, level: int) -> float:
        """Edge length in meters of a cell at the given level."""
        if level < 1:
            raise InvalidInputError(f"level must be >= 1, got {level}")
        return self.cell_size * self.level_factor ** (level - 1)


class OrientationWeights(BaseModel):
    model_config = ConfigDict(frozen=True)

    use_speed_factor: bool = False
    reference_speed: float = Field(50.0, gt=0)


class RunConfig(BaseModel):
    """Everything a CLI command needs besides its own file arguments."""

    grid: GridConfig = Field(default_factory=GridConfig)
    road_classes: FrozenSet[str] = MAJOR_ROAD_CLASSES
    orientation: OrientationWeights = Field(default_factory=OrientationWeights)
    level: int = Field(1, ge=1)
    kg_base_iri: str = DEFAULT_BASE_IRI
    log_level: str = "INFO"
    trace_file: Optional[Path] = None
    workers: int = Field(1, ge=1)

    @field_validator("road_classes", mode="before")
    @classmethod
    def _parse_classes(cls, value: Any) -> FrozenSet[str]:
        from gridskg.streetnet.models import RoadClass

        if isinstance(value, str):
            value = [v for v in value.split(",") if v.strip()]
        classes = frozenset(RoadClass(str(v).strip().lower()).value for v in value)
        return classes

    @field_validator("kg_base_iri")
    @classmethod
    def _check_base(cls, value: str) -> str:
        if "://" not in value:
            raise ValueError(f"base IRI must be absolute, got {value!r}")
        return value if value.endswith(("/", "#")) else value + "/"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Build a config from a plain dictionary, raising InvalidInputError."""
        try:
            return cls.model_validate(_normalize_layout(data))
        except (ValidationError, ValueError) as e:
            message = (
                format_validation_error(e) if isinstance(e, ValidationError) else str(e)
            )
            raise InvalidInputError(f"invalid configuration: {message}") from e

    @classmethod
    def from_env(cls) -> "RunConfig":
        """Load configuration from environment variables."""
        return cls.from_dict(env_overrides())

    @classmethod
    def load_from_file(cls, config_path: Path) -> "RunConfig":
        """Load configuration from a JSON file."""
        config_path = Path(config_path)
        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found at {config_path}")

        with open(config_path, "r", encoding="utf-8") as f:
            try:
                config_data = json.load(f)
            except json.JSONDecodeError as e:
                raise InvalidInputError(
                    f"config file {config_path} is not valid JSON: {e}"
                ) from e

        return cls.from_dict(config_data)

    def save_to_file(self, config_path: Path) -> None:
        """Save configuration to a JSON file."""
        config_data = self.model_dump(mode="json")
        config_data["road_classes"] = sorted(self.road_classes)

        config_path = Path(config_path)
        config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(config_path, "w", encoding="utf-8") as f:
            json.dump(config_data, f, indent=2, sort_keys=True)

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Return a copy with the non-None overrides applied on top."""
        data = self.model_dump()
        for key, value in _normalize_layout(overrides).items():
            if value is None:
                continue
            if isinstance(value, dict) and isinstance(data.get(key), dict):
                data[key] = {**data[key], **value}
            else:
                data[key] = value
        return RunConfig.from_dict(data)


_GRID_KEYS = ("origin_x", "origin_y", "cell_size", "level_factor", "crs_label")


def _normalize_layout(data: Dict[str, Any]) -> Dict[str, Any]:
    """Accept grid keys at top level as well as under "grid"."""
    data = dict(data)
    grid = dict(data.get("grid") or {})
    for key in _GRID_KEYS:
        if key in data:
            grid[key] = data.pop(key)
    if grid:
        data["grid"] = grid
    return data


def env_overrides() -> Dict[str, Any]:
    """Collect GRIDSKG_* environment variables into config keys."""
    overrides: Dict[str, Any] = {}
    if os.environ.get("GRIDSKG_BASE_IRI"):
        overrides["kg_base_iri"] = os.environ["GRIDSKG_BASE_IRI"]
    if os.environ.get("GRIDSKG_LEVEL"):
        overrides["level"] = os.environ["GRIDSKG_LEVEL"]
    if os.environ.get("GRIDSKG_CLASSES"):
        overrides["road_classes"] = os.environ["GRIDSKG_CLASSES"]
    if os.environ.get("GRIDSKG_LOG_LEVEL"):
        overrides["log_level"] = os.environ["GRIDSKG_LOG_LEVEL"]
    if os.environ.get("GRIDSKG_TRACE_FILE"):
        overrides["trace_file"] = os.environ["GRIDSKG_TRACE_FILE"]
    return overrides


def get_config(
    config_path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None
) -> RunConfig:
    """Resolve the run configuration: defaults < file < environment < flags."""
    config = RunConfig.load_from_file(config_path) if config_path else RunConfig()
    config = config.merged(env_overrides())
    if overrides:
        config = config.merged(overrides)
    return config
