"""
The evaluable-graphon abstraction and the part layout of partitioned graphons.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import LayoutMismatch
from src.geometry.dyadic import SCALE, snap
from src.state.models import Interval, PartSpec

logger = logging.getLogger(__name__)

# Largest lattice point below 1.
LAST_POINT = (SCALE - 1) / SCALE


@dataclass(frozen=True)
class QuadratureGrid:
    """
    Cell decomposition of [0, 1] used by product quadrature.

    Attributes:
        weights (np.ndarray): Cell measures, summing to 1.
        matrix (np.ndarray): Average of W over each pair of cells.
        parts (Optional[np.ndarray]): Part index of each cell (partitioned graphons only).
        exact (bool): Whether W is constant on every pair of cells, which makes the
            quadrature exact for every graph.
    """

    weights: np.ndarray
    matrix: np.ndarray
    parts: Optional[np.ndarray] = None
    exact: bool = False

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def restrict(self, part: int) -> Tuple[np.ndarray, np.ndarray]:
        """Cell indices and renormalised weights of one part."""
        if self.parts is None:
            raise LayoutMismatch("grid carries no part labels")
        index = np.flatnonzero(self.parts == part)
        weights = self.weights[index]
        return index, weights / weights.sum()


class PartitionedLayout:
    """
    Consecutive half-open intervals of [0, 1], one per part, in declaration order.

    The scaling map of part X is eta_X(x) = (x - start_X) / lambda(X), snapped down onto
    the 2^-53 lattice.
    """

    def __init__(self, parts: Sequence[PartSpec], require_degrees: bool = False):
        if not parts:
            raise ValueError("a layout needs at least one part")
        names = [p.name for p in parts]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate part names in {names}")
        total = sum((p.measure for p in parts), Fraction(0))
        if total != 1:
            raise ValueError(f"part measures sum to {total}, not 1")
        degrees = [p.degree for p in parts if p.degree is not None]
        if require_degrees and len(degrees) != len(parts):
            raise ValueError("every part needs an expected degree")
        if len(set(degrees)) != len(degrees):
            raise ValueError("expected part degrees must be pairwise distinct")
        self.parts: List[PartSpec] = list(parts)
        self._index: Dict[str, int] = {name: i for i, name in enumerate(names)}
        starts = [Fraction(0)]
        for part in self.parts[:-1]:
            starts.append(starts[-1] + part.measure)
        self.starts_exact = starts
        self.starts = np.asarray([float(s) for s in starts], dtype=np.float64)
        self.measures = np.asarray([float(p.measure) for p in self.parts], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.parts)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def names(self) -> List[str]:
        return [p.name for p in self.parts]

    def index(self, name: str) -> int:
        """Position of a part, raising LayoutMismatch for unknown labels."""
        try:
            return self._index[name]
        except KeyError:
            raise LayoutMismatch(f"unknown part '{name}' (layout has {self.names})") from None

    def measure(self, name: str) -> Fraction:
        return self.parts[self.index(name)].measure

    def interval(self, name: str) -> Interval:
        i = self.index(name)
        return Interval(start=float(self.starts_exact[i]), end=float(self.starts_exact[i] + self.parts[i].measure))

    def locate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Part index and scaled coordinate of global points.

        Args:
            x (np.ndarray): Points of [0, 1].

        Returns:
            Tuple[np.ndarray, np.ndarray]: Part indices and eta-scaled lattice coordinates.
        """
        x = np.asarray(x, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.starts, x, side="right") - 1, 0, len(self.parts) - 1)
        scaled = (x - self.starts[idx]) / self.measures[idx]
        return idx, snap(np.clip(scaled, 0.0, LAST_POINT))

    def to_global(self, idx: np.ndarray, s: np.ndarray) -> np.ndarray:
        """Inverse scaling map eta_X^{-1}."""
        idx = np.asarray(idx)
        return self.starts[idx] + np.asarray(s, dtype=np.float64) * self.measures[idx]

    def preimage_measure(self, name: str, start: Fraction, end: Fraction) -> Fraction:
        """lambda(eta_X^{-1}([start, end))) computed exactly; equals (end - start) * lambda(X)."""
        i = self.index(name)
        lo = self.starts_exact[i] + Fraction(start) * self.parts[i].measure
        hi = self.starts_exact[i] + Fraction(end) * self.parts[i].measure
        return hi - lo

    def to_dict(self) -> Dict[str, Dict[str, float]]:
        return {
            p.name: {"measure": float(p.measure), "start": float(s), "degree": p.degree}
            for p, s in zip(self.parts, self.starts_exact)
        }


class Graphon(ABC):
    """
    A symmetric measurable kernel [0, 1]^2 -> [0, 1], evaluable at lattice points.

    Implementations are immutable after construction and safe to evaluate from many
    threads at once.
    """

    name: str = "graphon"
    layout: Optional[PartitionedLayout] = None

    @abstractmethod
    def evaluate(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Vectorised W(x, y) for equally shaped arrays of global coordinates."""

    def eval(self, x: float, y: float) -> float:
        return float(self.evaluate(np.asarray([x], dtype=np.float64), np.asarray([y], dtype=np.float64))[0])

    def evaluate_parts(self, pi: np.ndarray, s: np.ndarray, pj: np.ndarray, t: np.ndarray) -> np.ndarray:
        """W at points given as (part index, scaled coordinate)."""
        if self.layout is None:
            raise LayoutMismatch(f"graphon '{self.name}' has no part layout")
        return self.evaluate(self.layout.to_global(pi, s), self.layout.to_global(pj, t))

    def grid(self, resolution: int) -> QuadratureGrid:
        """
        Midpoint quadrature grid with `resolution` uniform cells.

        Subclasses with piecewise constant structure override this with exact cells.
        """
        points = snap((np.arange(resolution) + 0.5) / resolution)
        xs, ys = np.meshgrid(points, points, indexing="ij")
        matrix = self.evaluate(xs.ravel(), ys.ravel()).reshape(resolution, resolution)
        weights = np.full(resolution, 1.0 / resolution)
        parts = self.layout.locate(points)[0] if self.layout is not None else None
        return QuadratureGrid(weights=weights, matrix=matrix, parts=parts)

    def edge_density(self) -> Optional[Fraction]:
        """Exact d(K2, W) when known in closed form."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"
