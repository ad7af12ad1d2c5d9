"""
Partitioned graphons assembled from pair kernels.
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from src.exceptions import InvalidStep, LayoutMismatch
from src.geometry.dyadic import snap
from src.graphon.core import Graphon, PartitionedLayout, QuadratureGrid
from src.graphon.kernels import ConstantKernel, PairKernel, ZeroKernel

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


def parse_pair(text: str) -> Pair:
    """'A1xB1' or 'A1,B1' -> ('A1', 'B1')."""
    for sep in ("x", ",", "*"):
        if sep in text:
            left, right = text.split(sep, 1)
            return left.strip(), right.strip()
    raise ValueError(f"cannot read a part pair from '{text}'")


def mutation_kernel(kernel: PairKernel) -> PairKernel:
    """Replacement used by negative controls: constant 1/2, or 0 if the kernel already is 1/2."""
    if isinstance(kernel, ConstantKernel) and kernel.p == 0.5:
        return ConstantKernel(0)
    return ConstantKernel(Fraction(1, 2))


class PartitionedGraphon(Graphon):
    """
    Graphon given by a layout and one kernel per listed pair of parts.

    A kernel registered for (X, Y) is mirrored onto (Y, X) by transposition; pairs that
    are not listed evaluate to zero.
    """

    def __init__(self, layout: PartitionedLayout, kernels: Mapping[Pair, PairKernel], name: str = "partitioned"):
        self.layout = layout
        self.name = name
        self._kernels: Dict[Pair, PairKernel] = {}
        for (x, y), kernel in kernels.items():
            layout.index(x)
            layout.index(y)
            if x == y and not kernel.symmetric:
                raise InvalidStep(f"diagonal block {x}x{x} needs a symmetric kernel")
            self._kernels[(x, y)] = kernel
            self._kernels[(y, x)] = kernel.transpose()
        self._zero = ZeroKernel()
        names = layout.names
        self._table: List[List[PairKernel]] = [
            [self._kernels.get((x, y), self._zero) for y in names] for x in names
        ]

    @property
    def listed_pairs(self) -> List[Pair]:
        """Ordered pairs carrying a kernel other than the implicit zero."""
        return sorted(self._kernels)

    def is_listed(self, x: str, y: str) -> bool:
        return (x, y) in self._kernels

    def kernel(self, x: str, y: str) -> PairKernel:
        """The kernel W^{XxY} (the zero kernel for unlisted pairs)."""
        return self._table[self.layout.index(x)][self.layout.index(y)]

    def kernels(self) -> Dict[Pair, PairKernel]:
        return dict(self._kernels)

    def evaluate(self, x, y):
        pi, s = self.layout.locate(x)
        pj, t = self.layout.locate(y)
        return self.evaluate_parts(pi, s, pj, t)

    def evaluate_parts(self, pi, s, pj, t):
        pi = np.asarray(pi, dtype=np.int64).reshape(-1)
        pj = np.asarray(pj, dtype=np.int64).reshape(-1)
        s = np.asarray(s, dtype=np.float64).reshape(-1)
        t = np.asarray(t, dtype=np.float64).reshape(-1)
        out = np.zeros(s.shape, dtype=np.float64)
        n = len(self.layout)
        codes = pi * n + pj
        for code in np.unique(codes):
            i, j = divmod(int(code), n)
            kernel = self._table[i][j]
            if kernel is self._zero:
                continue
            mask = codes == code
            out[mask] = kernel.values(s[mask], t[mask])
        return out

    def evaluate_in(self, x: str, s: np.ndarray, y: str, t: np.ndarray) -> np.ndarray:
        """W at scaled points of two named parts."""
        return self.kernel(x, y).values(np.asarray(s, dtype=np.float64), np.asarray(t, dtype=np.float64))

    # -- degrees -----------------------------------------------------------------------

    def relative_degree(self, x: str, s: np.ndarray, y: str) -> np.ndarray:
        """deg_Y of vertices of part X at scaled coordinates s."""
        return self.kernel(x, y).row_degree(np.atleast_1d(np.asarray(s, dtype=np.float64)))

    def relative_level_degree(self, x: str, s: np.ndarray, y: str, m: int) -> np.ndarray:
        """deg_{Y,m}: relative degree in the m-th level of Y."""
        return self.kernel(x, y).row_level_degree(np.atleast_1d(np.asarray(s, dtype=np.float64)), m)

    def union_degree(self, x: str, s: np.ndarray, parts: Iterable[str]) -> np.ndarray:
        """Relative degree in the union of the given parts."""
        parts = list(parts)
        total = sum((float(self.layout.measure(y)) * self.relative_degree(x, s, y) for y in parts),
                    np.zeros(np.atleast_1d(s).shape))
        return total / float(sum(self.layout.measure(y) for y in parts))

    def degree(self, x: str, s: np.ndarray) -> np.ndarray:
        """Total degree of vertices of part X."""
        return self.union_degree(x, s, self.layout.names)

    def block_density(self, x: str, y: str) -> Fraction:
        """Exact (1 / (lambda(X) lambda(Y))) int_X int_Y W."""
        return self.kernel(x, y).density()

    def part_degree(self, x: str) -> Fraction:
        """Mean degree of part X, exactly."""
        return sum((self.layout.measure(y) * self.block_density(x, y) for y in self.layout.names), Fraction(0))

    def edge_density(self) -> Fraction:
        return sum((self.layout.measure(x) * self.part_degree(x) for x in self.layout.names), Fraction(0))

    # -- quadrature and variants -------------------------------------------------------

    def grid(self, resolution: int) -> QuadratureGrid:
        """
        Midpoint grid with `resolution` cells in every part.

        Args:
            resolution (int): Cells per part.

        Returns:
            QuadratureGrid: Grid with part labels for decorated quadrature.
        """
        per_part = max(1, resolution)
        local = snap((np.arange(per_part) + 0.5) / per_part)
        count = len(self.layout)
        parts = np.repeat(np.arange(count), per_part)
        scaled = np.tile(local, count)
        weights = np.repeat(self.layout.measures / per_part, per_part)
        pi, pj = np.meshgrid(parts, parts, indexing="ij")
        si, sj = np.meshgrid(scaled, scaled, indexing="ij")
        matrix = self.evaluate_parts(pi.ravel(), si.ravel(), pj.ravel(), sj.ravel()).reshape(parts.size, parts.size)
        constant = all(isinstance(k, (ConstantKernel, ZeroKernel)) for row in self._table for k in row)
        return QuadratureGrid(weights=weights, matrix=matrix, parts=parts, exact=constant)

    def with_kernels(self, overrides: Mapping[Pair, PairKernel], name: Optional[str] = None) -> "PartitionedGraphon":
        """Copy with some kernels replaced (and mirrored)."""
        kernels = {pair: k for pair, k in self._kernels.items() if (pair[1], pair[0]) not in overrides}
        kernels.update(overrides)
        return PartitionedGraphon(self.layout, kernels, name=name or self.name)

    def mutated(self, pair: Pair) -> "PartitionedGraphon":
        """Negative control: the kernel of one pair (and its mirror) replaced by a constant."""
        x, y = pair
        replacement = mutation_kernel(self.kernel(x, y))
        logger.info("Mutating kernel %sx%s to %s", x, y, replacement.name)
        return self.with_kernels({(x, y): replacement}, name=f"{self.name}[{x}x{y} mutated]")


def require_partitioned(graphon: Graphon) -> PartitionedLayout:
    if graphon.layout is None:
        raise LayoutMismatch(f"graphon '{graphon.name}' is not partitioned")
    return graphon.layout
