"""
Fixed-grid product quadrature of induced densities.
"""
import logging
import math
import string
from typing import List, Optional

import numpy as np

from src.exceptions import LayoutMismatch, TooLarge
from src.graph.graph_spec import EdgeState, GraphSpec, resolution_factors
from src.graphon.core import Graphon, QuadratureGrid
from src.graphon.partitioned import PartitionedGraphon
from src.state.models import DensityEstimate

logger = logging.getLogger(__name__)

# Upper bound on the number of cell tuples visited by one contraction.
CONTRACTION_BUDGET = 1 << 27
# Largest grid side; the cell matrix is side x side.
MAX_CELLS = 2048
# Quadrature is offered for graphs up to this order.
MAX_ORDER = 4


def default_resolution(graphon: Graphon, order: int) -> int:
    """
    Cells per axis (per part, for partitioned graphons) that keep the contraction within budget.

    Raises:
        TooLarge: If not even one cell per part fits.
    """
    side = min(MAX_CELLS, int(math.floor(CONTRACTION_BUDGET ** (1.0 / max(order, 2)))))
    parts = len(graphon.layout) if graphon.layout is not None and _per_part_grid(graphon) else 1
    resolution = side // parts
    if resolution < 1:
        raise TooLarge(f"no quadrature grid for a graph of order {order} on {parts} parts")
    return resolution


def _per_part_grid(graphon: Graphon) -> bool:
    return isinstance(graphon, PartitionedGraphon)


def _vertex_weights(graph: GraphSpec, grid: QuadratureGrid, graphon: Graphon) -> List[np.ndarray]:
    if not graph.is_decorated:
        return [grid.weights] * graph.n
    if graphon.layout is None:
        raise LayoutMismatch(f"decorated graph against unpartitioned graphon '{graphon.name}'")
    weights = []
    for v in range(graph.n):
        part = graphon.layout.index(graph.label(v))
        index, local = grid.restrict(part)
        w = np.zeros(grid.size)
        w[index] = local
        weights.append(w)
    return weights


def contract(graph: GraphSpec, grid: QuadratureGrid, vertex_weights: List[np.ndarray]) -> float:
    """
    Sum over cell tuples of the vertex weights times the edge and non-edge factors.

    Free pairs contribute a factor 1.
    """
    letters = string.ascii_lowercase
    operands: List[np.ndarray] = []
    subscripts: List[str] = []
    complement = 1.0 - grid.matrix
    for v in range(graph.n):
        operands.append(vertex_weights[v])
        subscripts.append(letters[v])
    for i, j in graph.pairs():
        state = graph.state(i, j)
        if state == EdgeState.FREE:
            continue
        operands.append(grid.matrix if state == EdgeState.EDGE else complement)
        subscripts.append(letters[i] + letters[j])
    expression = ",".join(subscripts) + "->"
    return float(np.einsum(expression, *operands, optimize=True))


def quadrature_density(graph: GraphSpec, graphon: Graphon, resolution: Optional[int] = None) -> DensityEstimate:
    """
    d(H, W) by product integration over the graphon's quadrature grid.

    Args:
        graph (GraphSpec): Unrooted graph, plain or decorated, with at most four vertices.
        graphon (Graphon): The graphon.
        resolution (Optional[int]): Cells per axis (per part); chosen automatically if omitted.

    Returns:
        DensityEstimate: A quadrature estimate.
    """
    if graph.is_rooted:
        raise ValueError("quadrature handles unrooted graphs only")
    if graph.n > MAX_ORDER:
        raise TooLarge(f"quadrature is limited to graphs of order {MAX_ORDER}, got {graph.n}")
    resolution = resolution or default_resolution(graphon, graph.n)
    grid = graphon.grid(resolution)
    if grid.size ** graph.n > CONTRACTION_BUDGET * 64:
        raise TooLarge(f"grid of {grid.size} cells is too fine for order {graph.n}")
    weights = _vertex_weights(graph, grid, graphon)
    value = sum(factor * contract(r, grid, weights) for r, factor in resolution_factors(graph))
    logger.debug("quadrature %s on %s: %.12g over %d cells (exact grid: %s)",
                 graph.describe(), graphon.name, value, grid.size, grid.exact)
    return DensityEstimate.exact(value, cells=grid.size ** graph.n)

