"""
JSON summaries printed by the command-line tool.

Every command writes exactly one of these models to standard output, so
runs can be scripted:

    gridskg simplify network.jsonl --out build/ | jq .links
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class IngestSummary(BaseModel):
    """Result of loading, filtering and normalizing a street network."""

    nodes: int = Field(description="Nodes in the normalized network")
    segments: int = Field(description="Directed segments in the normalized network")
    input_segments: int = Field(description="Directed segments before normalization")
    split_segments: int = Field(description="Input segments split at cell borders")
    filtered_segments: int = Field(0, description="Segments removed by the road class filter")
    output: Optional[str] = Field(None, description="Normalized network file")


class OrientSummary(BaseModel):
    level: int = Field(description="Grid level of the indicators")
    cells: int = Field(description="Cells with a row in the CSV")
    total: Dict[str, float] = Field(description="Indicator sums over all cells")
    output: Optional[str] = Field(None, description="Orientation CSV file")
    kg_triples_added: int = Field(0, description="Orientation triples appended to the KG")


class CellStats(BaseModel):
    terminal_nodes: int
    links: int


class SimplifySummary(BaseModel):
    """Result of building the simplified network."""

    level: int = Field(description="Grid level of the cells the network is built on")
    cells: int = Field(description="Non-empty cells")
    terminal_nodes: int = Field(description="Terminal nodes in the network")
    links: int = Field(description="Links in the network")
    link_types: Dict[str, int] = Field(description="Link count per link type")
    per_cell: Dict[str, CellStats] = Field(description="Terminal node and link counts per cell")
    triples: int = Field(description="Triples written to the KG file")
    links_csv: Optional[str] = None
    kg: Optional[str] = None


class ObserveSummary(BaseModel):
    observations: int = Field(description="Observations read from the CSV")
    triples_added: int = Field(description="Triples appended to the KG")
    kg: Optional[str] = None


class AnnotateSummary(BaseModel):
    entities: int = Field(0, description="Entities placed in cells")
    regions: int = Field(0, description="Regions mapped to cells")
    region_cells: int = Field(0, description="sfWithin triples produced for regions")
    triples_added: int = Field(0, description="Triples appended to the KG")
    kg: Optional[str] = None


class RouteSummary(BaseModel):
    """Result of a routing query."""

    origin: str
    target: str
    cost_model: str
    total_weight: float = Field(description="Sum of link weights in meters")
    total_cost: float = Field(description="Route cost in cost-model units")
    links: int = Field(description="Links on the route")
    cells: List[str] = Field(description="Traversed cells in order")
    explored_cells: int = Field(description="Cells whose nodes the search expanded")
    excluded_cells: List[str] = Field(default_factory=list)
    wall_time_ms: float = Field(description="Search time in milliseconds")
    output: Optional[str] = Field(None, description="Route GeoJSON file")


class CellImpactSummary(BaseModel):
    cell: str
    weight: Optional[float] = Field(None, description="Route weight without the cell")
    delta: Optional[float] = Field(None, description="Increase over the baseline")
    unreachable: bool


class ScenarioSummary(BaseModel):
    """Critical cells of a route under an optional exclusion."""

    origin: str
    target: str
    baseline_weight: Optional[float] = None
    excluded_cells: List[str] = Field(default_factory=list)
    impacts: List[CellImpactSummary] = Field(default_factory=list)


class StatsSummary(BaseModel):
    triples: int
    cells: int
    terminal_nodes: int
    links: int
    link_types: Dict[str, int]
    observations: int
    cells_with_orientation: int
    memory_mb: float = Field(description="Resident memory of the process")


class ErrorSummary(BaseModel):
    error: str = Field(description="Error message")
    error_type: str
    exit_code: int
    line: Optional[int] = Field(None, description="Offending input line, when known")
    explored_cells: Optional[int] = None
