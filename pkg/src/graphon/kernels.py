"""
Primitive graphons and the pair kernels partitioned graphons are assembled from.

A pair kernel K^{XxY}(s, t) lives on scaled coordinates of two parts; it need not be
symmetric, and K^{YxX}(t, s) = K^{XxY}(s, t) is supplied by TransposedKernel. Besides
evaluation every kernel knows its relative degrees in closed form:

    row_degree(s)          = int_0^1 K(s, t) dt
    row_level_degree(s, m) = 2^m int_{level m} K(s, t) dt
    col_degree / col_level_degree  the same in the other variable
"""
import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.exceptions import InvalidStep
from src.geometry.dyadic import PRECISION, level_bounds, levels, snap
from src.graphon.core import Graphon, PartitionedLayout, QuadratureGrid
from src.state.models import PartSpec

logger = logging.getLogger(__name__)

# Levels present on the 2^-53 lattice.
MAX_LEVEL = PRECISION + 1
# Midpoints used by the numeric fallback of level degrees.
LEVEL_GRID = 256


def lattice_levels(s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Levels and relative positions of arbitrary floats, snapped onto the lattice first."""
    return levels(snap(np.clip(np.asarray(s, dtype=np.float64), 0.0, 1.0)))


def level_overlap(threshold: np.ndarray, m: int) -> np.ndarray:
    """2^m * |[threshold, 1) intersected with level m|."""
    lo, hi = level_bounds(m)
    return np.clip(hi - np.maximum(lo, threshold), 0.0, hi - lo) * 2.0 ** m


def _as_array(s: Union[float, np.ndarray]) -> np.ndarray:
    return np.atleast_1d(np.asarray(s, dtype=np.float64))


class PairKernel(ABC):
    """
    Kernel on the product of two (scaled) parts.

    Attributes:
        name (str): Vocabulary name.
        zero_one (bool): Whether the kernel only takes the values 0 and 1.
        symmetric (bool): Whether K(s, t) = K(t, s), required on diagonal blocks.
    """

    name: str = "kernel"
    zero_one: bool = True
    symmetric: bool = False

    @abstractmethod
    def values(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        """K(s, t) for equally shaped arrays."""

    @abstractmethod
    def row_degree(self, s: np.ndarray) -> np.ndarray:
        """int_0^1 K(s, t) dt."""

    @abstractmethod
    def col_degree(self, t: np.ndarray) -> np.ndarray:
        """int_0^1 K(s, t) ds."""

    @abstractmethod
    def density(self) -> Fraction:
        """int int K."""

    def row_level_degree(self, s: np.ndarray, m: int) -> np.ndarray:
        """Relative degree of s in level m of the column part (midpoint rule fallback)."""
        s = _as_array(s)
        lo, hi = level_bounds(m)
        t = snap(lo + (np.arange(LEVEL_GRID) + 0.5) * (hi - lo) / LEVEL_GRID)
        grid_s = np.repeat(s, LEVEL_GRID)
        grid_t = np.tile(t, s.size)
        return self.values(grid_s, grid_t).reshape(s.size, LEVEL_GRID).mean(axis=1)

    def col_level_degree(self, t: np.ndarray, m: int) -> np.ndarray:
        return self.transpose().row_level_degree(t, m)

    def transpose(self) -> "PairKernel":
        if self.symmetric:
            return self
        return TransposedKernel(self)

    def eval(self, s: float, t: float) -> float:
        return float(self.values(_as_array(s), _as_array(t))[0])

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class TransposedKernel(PairKernel):
    """K^T(s, t) = K(t, s)."""

    def __init__(self, base: PairKernel):
        self.base = base
        self.name = f"{base.name}^T"
        self.zero_one = base.zero_one

    def values(self, s, t):
        return self.base.values(t, s)

    def row_degree(self, s):
        return self.base.col_degree(s)

    def col_degree(self, t):
        return self.base.row_degree(t)

    def row_level_degree(self, s, m):
        return self.base.col_level_degree(s, m)

    def col_level_degree(self, t, m):
        return self.base.row_level_degree(t, m)

    def density(self):
        return self.base.density()

    def transpose(self):
        return self.base


class ZeroKernel(PairKernel):
    name = "zero"
    symmetric = True

    def values(self, s, t):
        return np.zeros(np.shape(s))

    def row_degree(self, s):
        return np.zeros(np.shape(_as_array(s)))

    col_degree = row_degree

    def row_level_degree(self, s, m):
        return np.zeros(np.shape(_as_array(s)))

    col_level_degree = row_level_degree

    def density(self):
        return Fraction(0)


class ConstantKernel(PairKernel):
    """K = p everywhere."""

    symmetric = True

    def __init__(self, p: Union[float, Fraction]):
        if not 0 <= p <= 1:
            raise ValueError(f"constant kernel value {p} outside [0, 1]")
        self.p_exact = Fraction(p).limit_denominator(1 << 40) if isinstance(p, float) else Fraction(p)
        self.p = float(self.p_exact)
        self.name = f"constant({self.p:g})"
        self.zero_one = self.p in (0.0, 1.0)

    def values(self, s, t):
        return np.full(np.shape(s), self.p)

    def row_degree(self, s):
        return np.full(np.shape(_as_array(s)), self.p)

    col_degree = row_degree

    def row_level_degree(self, s, m):
        return np.full(np.shape(_as_array(s)), self.p)

    col_level_degree = row_level_degree

    def density(self):
        return self.p_exact


class FirstLevelKernel(PairKernel):
    """K(s, t) = 1 iff t <= 1/2: every row sees exactly the first level of the column part."""

    name = "first-level"

    def values(self, s, t):
        return (np.asarray(t) <= 0.5).astype(np.float64) * np.ones(np.shape(s))

    def row_degree(self, s):
        return np.full(np.shape(_as_array(s)), 0.5)

    def col_degree(self, t):
        return (_as_array(t) <= 0.5).astype(np.float64)

    def row_level_degree(self, s, m):
        return np.full(np.shape(_as_array(s)), 1.0 if m == 1 else 0.0)

    def col_level_degree(self, t, m):
        return self.col_degree(t)

    def density(self):
        return Fraction(1, 2)


class CheckerKernel(PairKernel):
    """Diagonal checker: 1 iff both points lie in the same level."""

    name = "checker"
    symmetric = True

    def values(self, s, t):
        return (lattice_levels(s)[0] == lattice_levels(t)[0]).astype(np.float64)

    def row_degree(self, s):
        return np.ldexp(1.0, -lattice_levels(_as_array(s))[0])

    col_degree = row_degree

    def row_level_degree(self, s, m):
        return (lattice_levels(_as_array(s))[0] == m).astype(np.float64)

    col_level_degree = row_level_degree

    def density(self):
        return Fraction(1, 3)


class ShiftedCheckerKernel(PairKernel):
    """1 iff level(s) = level(t) + 1; pairs level k+1 of the rows with level k of the columns."""

    name = "shifted-checker"

    def values(self, s, t):
        return (lattice_levels(s)[0] == lattice_levels(t)[0] + 1).astype(np.float64)

    def row_degree(self, s):
        k = lattice_levels(_as_array(s))[0]
        return np.where(k >= 2, np.ldexp(1.0, -(k - 1)), 0.0)

    def col_degree(self, t):
        return np.ldexp(1.0, -(lattice_levels(_as_array(t))[0] + 1))

    def row_level_degree(self, s, m):
        return (lattice_levels(_as_array(s))[0] - 1 == m).astype(np.float64)

    def col_level_degree(self, t, m):
        return (lattice_levels(_as_array(t))[0] + 1 == m).astype(np.float64)

    def density(self):
        return Fraction(1, 6)


class HalfKernel(PairKernel):
    """Half graphon: 1 iff s + t >= 1."""

    name = "half"
    symmetric = True

    def values(self, s, t):
        return (np.asarray(s) + np.asarray(t) >= 1.0).astype(np.float64)

    def row_degree(self, s):
        return _as_array(s).copy()

    col_degree = row_degree

    def row_level_degree(self, s, m):
        return level_overlap(1.0 - _as_array(s), m)

    col_level_degree = row_level_degree

    def density(self):
        return Fraction(1, 2)


# -- primitive graphons --------------------------------------------------------------


class KernelGraphon(Graphon):
    """A graphon given by a symmetric kernel on the whole unit square."""

    def __init__(self, kernel: PairKernel, name: Optional[str] = None):
        if not kernel.symmetric:
            raise InvalidStep(f"kernel '{kernel.name}' is not symmetric")
        self.kernel = kernel
        self.name = name or kernel.name

    def evaluate(self, x, y):
        return self.kernel.values(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))

    def degree(self, x: np.ndarray) -> np.ndarray:
        return self.kernel.row_degree(x)

    def edge_density(self) -> Fraction:
        return self.kernel.density()


class ConstantGraphon(KernelGraphon):
    def __init__(self, p: Union[float, Fraction]):
        super().__init__(ConstantKernel(p))
        self.p = self.kernel.p

    def grid(self, resolution: int) -> QuadratureGrid:
        return QuadratureGrid(weights=np.ones(1), matrix=np.full((1, 1), self.p), exact=True)


class HalfGraphon(KernelGraphon):
    def __init__(self):
        super().__init__(HalfKernel(), name="half")

    def grid(self, resolution: int) -> QuadratureGrid:
        """Cell averages on a uniform grid: 1 above the anti-diagonal cells, 1/2 on them."""
        i = np.arange(resolution)
        diag = i[:, None] + i[None, :]
        matrix = np.where(diag >= resolution, 1.0, np.where(diag == resolution - 1, 0.5, 0.0))
        return QuadratureGrid(weights=np.full(resolution, 1.0 / resolution), matrix=matrix)


class CheckerGraphon(KernelGraphon):
    """The diagonal checker; quadrature cells are levels 1..L plus one tail cell."""

    def __init__(self, kernel: PairKernel, depth: int = 30, name: Optional[str] = None):
        super().__init__(kernel, name=name)
        self.depth = depth

    def grid(self, resolution: int) -> QuadratureGrid:
        depth = self.depth
        weights = np.ldexp(1.0, -np.arange(1, depth + 1))
        weights = np.append(weights, 2.0 ** -depth)
        points = np.asarray([level_bounds(k)[0] for k in range(1, depth + 2)])
        xs, ys = np.meshgrid(points, points, indexing="ij")
        matrix = self.kernel.values(xs.ravel(), ys.ravel()).reshape(depth + 1, depth + 1)
        # Tail x tail average of the checker: sum_{k > L} 4^-k / 4^-L = 1/3.
        matrix[depth, depth] = 1.0 / 3.0
        return QuadratureGrid(weights=weights, matrix=matrix)


class StepGraphon(Graphon):
    """Piecewise constant graphon with consecutive blocks."""

    def __init__(self, blocks: Sequence[Sequence[float]], widths: Sequence[Union[float, Fraction]],
                 names: Optional[Sequence[str]] = None):
        matrix = np.asarray(blocks, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] != len(widths):
            raise InvalidStep("block matrix must be square with one row per width")
        if not np.array_equal(matrix, matrix.T):
            raise InvalidStep("block matrix is not symmetric")
        if np.any(matrix < 0) or np.any(matrix > 1):
            raise InvalidStep("block densities must lie in [0, 1]")
        exact_widths = [Fraction(w).limit_denominator(1 << 40) if isinstance(w, float) else Fraction(w)
                        for w in widths]
        if any(w <= 0 for w in exact_widths):
            raise InvalidStep("block widths must be positive")
        if sum(exact_widths) != 1:
            raise InvalidStep(f"block widths sum to {float(sum(exact_widths))}, not 1")
        names = list(names) if names is not None else [f"P{i}" for i in range(len(widths))]
        self.blocks = matrix
        self.layout = PartitionedLayout([PartSpec(name=n, measure=w) for n, w in zip(names, exact_widths)])
        self.name = f"step({len(widths)})"

    def evaluate(self, x, y):
        i = self.layout.locate(x)[0]
        j = self.layout.locate(y)[0]
        return self.blocks[i, j]

    def evaluate_parts(self, pi, s, pj, t):
        return self.blocks[np.asarray(pi), np.asarray(pj)]

    def degree(self, x: np.ndarray) -> np.ndarray:
        return self.blocks[self.layout.locate(x)[0]] @ self.layout.measures

    def grid(self, resolution: int) -> QuadratureGrid:
        return QuadratureGrid(weights=self.layout.measures.copy(), matrix=self.blocks.copy(),
                              parts=np.arange(len(self.layout)), exact=True)

    def edge_density(self) -> Fraction:
        widths = [p.measure for p in self.layout.parts]
        total = Fraction(0)
        for i, wi in enumerate(widths):
            for j, wj in enumerate(widths):
                total += wi * wj * Fraction(float(self.blocks[i, j])).limit_denominator(1 << 40)
        return total


def constant(p: Union[float, Fraction]) -> ConstantGraphon:
    return ConstantGraphon(p)


def half_graphon() -> HalfGraphon:
    """W(x, y) = 1 iff x + y >= 1."""
    return HalfGraphon()


def diagonal_checker(depth: int = 30) -> CheckerGraphon:
    """kappa(x, y) = 1 iff x and y lie in the same level."""
    return CheckerGraphon(CheckerKernel(), depth=depth, name="checker")


def shifted_checker() -> ShiftedCheckerKernel:
    """
    The kernel 1[level(x) = level(y) + 1].

    It is not symmetric, so it is returned as a pair kernel for use inside a partitioned
    assembly, which adds the mirrored block.
    """
    return ShiftedCheckerKernel()


def step_graphon(blocks: Sequence[Sequence[float]], widths: Sequence[Union[float, Fraction]],
                 names: Optional[Sequence[str]] = None) -> StepGraphon:
    return StepGraphon(blocks, widths, names)
