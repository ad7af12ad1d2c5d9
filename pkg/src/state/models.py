"""
Value models exchanged between graphonlab modules.
"""
import math
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class EstimatorKind(str, Enum):
    """How a density value was obtained."""

    MONTE_CARLO = "monte-carlo"
    QUADRATURE = "quadrature"


class Verdict(str, Enum):
    """Outcome of a single check."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class DensityEstimate(BaseModel):
    """A numerical value together with its statistical uncertainty."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Point estimate")
    stderr: float = Field(0.0, ge=0.0, description="Standard error of the estimate")
    samples: int = Field(0, ge=0, description="Number of samples or quadrature cells used")
    kind: EstimatorKind = Field(EstimatorKind.QUADRATURE, description="Estimator that produced the value")

    @model_validator(mode="after")
    def _quadrature_is_exact(self) -> "DensityEstimate":
        if self.kind == EstimatorKind.QUADRATURE and self.stderr != 0.0:
            raise ValueError("quadrature estimates carry no standard error")
        return self

    @classmethod
    def exact(cls, value: float, cells: int = 1) -> "DensityEstimate":
        return cls(value=float(value), stderr=0.0, samples=cells, kind=EstimatorKind.QUADRATURE)

    @classmethod
    def from_samples(cls, values: Any) -> "DensityEstimate":
        """
        Build a Monte Carlo estimate from per-sample values.

        Args:
            values (array-like): One value per independent sample.

        Returns:
            DensityEstimate: Sample mean with stderr = sample sd / sqrt(n).
        """
        arr = np.asarray(values, dtype=np.float64)
        n = int(arr.size)
        if n == 0:
            raise ValueError("no samples")
        stderr = float(arr.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(value=float(arr.mean()), stderr=stderr, samples=n, kind=EstimatorKind.MONTE_CARLO)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the estimate to a JSON-ready dictionary."""
        return self.model_dump(mode="json")


class CheckReport(BaseModel):
    """Result of comparing two sides of a constraint or a forced property."""

    name: str = Field(..., description="Constraint or battery item name")
    lhs: DensityEstimate = Field(..., description="Left-hand side estimate")
    rhs: DensityEstimate = Field(..., description="Right-hand side estimate")
    delta: float = Field(..., ge=0.0, description="Absolute difference |lhs - rhs|")
    tolerance: float = Field(..., gt=0.0, description="Accepted absolute difference")
    verdict: Verdict = Field(..., description="pass, fail or inconclusive")
    details: Dict[str, Any] = Field(default_factory=dict, description="Item specific diagnostics")

    def to_dict(self) -> Dict[str, Any]:
        """Convert the report to a JSON-ready dictionary."""
        return self.model_dump(mode="json")

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS


class PartSpec(BaseModel):
    """One part of a partitioned graphon."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str = Field(..., description="Part label used by decorated graphs")
    measure: Fraction = Field(..., description="Lebesgue measure of the part")
    degree: Optional[float] = Field(None, description="Expected degree of every vertex of the part")

    @field_validator("measure", mode="before")
    @classmethod
    def _as_fraction(cls, value: Any) -> Fraction:
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value).limit_denominator(1 << 40) if isinstance(value, float) else Fraction(value)

    @field_validator("measure")
    @classmethod
    def _positive(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("part measure must be positive")
        return value


class Interval(BaseModel):
    """Half-open subinterval [start, end) of [0, 1]."""

    model_config = ConfigDict(frozen=True)

    start: float = Field(..., ge=0.0, le=1.0)
    end: float = Field(..., ge=0.0, le=1.0)


class SandwichRow(BaseModel):
    """One row of the distance sandwich for a pair of vertices."""

    pair_id: int = Field(..., description="Index of the pair in the run")
    x: float = Field(..., description="First anchor (global coordinate)")
    x_prime: float = Field(..., description="Second anchor (global coordinate)")
    lower: float = Field(..., description="Sum of lambda(B2_i) |delta_i|")
    l1: float = Field(..., description="L1 distance of the neighbourhood functions")
    upper: float = Field(..., description="(14/27) sum 2^-i |delta_i|")
    dw_lower: float = Field(..., description="(1/729) sum 4^-i |delta_i|")
    dw_printed_lower: float = Field(..., description="(1/27) sum 4^-i |delta_i|, informational")
    dw: float = Field(..., description="Similarity distance estimate")
    dw_stderr: float = Field(..., description="Standard error of the similarity distance")
    holds: bool = Field(..., description="Whether the inequality chain holds")

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


def summarize_verdicts(reports: List[CheckReport]) -> Dict[str, int]:
    """Count reports per verdict."""
    counts = {verdict.value: 0 for verdict in Verdict}
    for report in reports:
        counts[report.verdict.value] += 1
    return counts


class RootAssignment(BaseModel):
    """Coordinates of the roots of a rooted graph and the density c of that root tuple."""

    model_config = ConfigDict(frozen=True)

    coords: Tuple[float, ...] = Field(..., description="Global coordinate of every root, in root order")
    weight: float = Field(..., ge=0.0, le=1.0, description="Probability density that the roots induce H0")

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()
