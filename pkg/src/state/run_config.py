"""
Run configuration and environment-derived settings.
"""
import os
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

STOCHASTIC_COMMANDS = {"verify", "density", "sample", "distances", "convergence", "evaluate", "classes"}
OUTPUT_FORMATS = ("json", "csv", "table")
DENSITY_METHODS = ("auto", "monte-carlo", "quadrature")


class LabSettings(BaseModel):
    """Settings read from the environment (a .env file is loaded by the CLI entry point)."""

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1, description="Worker cap")
    log_level: str = Field("INFO", description="Root logging level")
    depth: int = Field(30, ge=1, le=52, description="Default truncation depth L")

    @classmethod
    def from_env(cls) -> "LabSettings":
        """
        Build settings from GRAPHONLAB_* environment variables.

        Returns:
            LabSettings: The settings.
        """
        values: Dict[str, Any] = {}
        if os.getenv("GRAPHONLAB_THREADS"):
            values["threads"] = int(os.environ["GRAPHONLAB_THREADS"])
        if os.getenv("GRAPHONLAB_LOG_LEVEL"):
            values["log_level"] = os.environ["GRAPHONLAB_LOG_LEVEL"].upper()
        if os.getenv("GRAPHONLAB_DEPTH"):
            values["depth"] = int(os.environ["GRAPHONLAB_DEPTH"])
        return cls(**values)


class RunConfig(BaseModel):
    """Everything a CLI command needs to run reproducibly."""

    command: str = Field(..., description="Subcommand name")
    graphon: str = Field("hypercubical", description="Builtin graphon name or path to a graphon spec file")
    constraints: List[str] = Field(default_factory=list, description="Constraint file paths")
    graphs: List[str] = Field(default_factory=list, description="Graph file paths or builtin graph names")
    seed: Optional[int] = Field(None, ge=0, description="Root seed of every random stream")
    budget: int = Field(1_000_000, ge=1, description="Monte Carlo sample budget")
    tol: Optional[float] = Field(None, gt=0.0, description="Absolute tolerance of checks")
    depth: int = Field(30, ge=1, le=52, description="Truncation depth L")
    out: str = Field("reports", description="Output directory")
    format: str = Field("json", description="Report format")
    resolution: int = Field(256, description="Heatmap resolution in pixels")
    items: Optional[List[str]] = Field(None, description="Battery items to run (None means all)")
    mutate: Optional[str] = Field(None, description="Kernel pair to corrupt, e.g. 'A1xB1'")
    pairs: int = Field(50, ge=1, description="Number of vertex pairs for distance reports")
    n: int = Field(500, ge=1, description="Order of sampled graphs")
    schedule: List[int] = Field(default_factory=lambda: [50, 200, 800], description="Orders for convergence runs")
    trials: int = Field(20, ge=1, description="Trials per order in convergence runs")
    threads: Optional[int] = Field(None, ge=1, description="Worker cap overriding GRAPHONLAB_THREADS")
    method: str = Field("auto", description="Density method: auto, monte-carlo or quadrature")
    eps: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05], description="Radii of the class counter")
    image: str = Field("heatmap.png", description="Heatmap file name inside the output directory (.png or .pgm)")
    preview: bool = Field(False, description="Also write an annotated matplotlib preview of the heatmap")
    quiet: bool = Field(False, description="Disable progress bars")

    @field_validator("method")
    @classmethod
    def _known_method(cls, value: str) -> str:
        if value not in DENSITY_METHODS:
            raise ValueError(f"method must be one of {DENSITY_METHODS}")
        return value

    @field_validator("format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {OUTPUT_FORMATS}")
        return value

    @model_validator(mode="after")
    def _seed_for_stochastic(self) -> "RunConfig":
        if self.command in STOCHASTIC_COMMANDS and self.seed is None:
            raise ValueError(f"command '{self.command}' needs an explicit --seed")
        if self.command == "heatmap" and self.resolution < 64:
            raise ValueError("heatmap resolution must be at least 64")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return self.model_dump()
