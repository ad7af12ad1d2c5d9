"""
Induced, rooted and decorated subgraph densities of graphons.

Monte Carlo estimators draw vertex tuples from counter-based streams keyed by
(seed, stream, chunk); quadrature is delegated to src.density.quadrature.
"""
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.density.quadrature import quadrature_density
from src.density.streams import chunk_sizes, concat, generator, lattice_uniform, map_chunks
from src.exceptions import LayoutMismatch, RootsIncompatible
from src.graph.graph_spec import EdgeState, GraphSpec, PairT, resolution_factors
from src.graphon.core import LAST_POINT, Graphon
from src.graphon.partitioned import PartitionedGraphon, require_partitioned
from src.state.models import DensityEstimate, EstimatorKind, RootAssignment

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000
MONTE_CARLO = "monte-carlo"
QUADRATURE = "quadrature"

# Stream keys separating the estimators that share a seed.
_STREAM_PLAIN = 1
_STREAM_DECORATED = 2
_STREAM_ROOTED = 3
_STREAM_ROOT_SAMPLES = 4
_STREAM_EXPECTATION = 5

# Rejection sampling of root tuples gives up after this many rounds.
MAX_REJECTION_ROUNDS = 64


class VertexSample:
    """
    A batch of vertex tuples.

    `points` holds global coordinates, or part-scaled coordinates when `parts` is set.
    """

    def __init__(self, points: np.ndarray, parts: Optional[np.ndarray] = None):
        self.points = points
        self.parts = parts

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def values(self, graphon: Graphon, i: int, j: int) -> np.ndarray:
        """W between vertices i and j of every tuple."""
        if self.parts is None:
            return graphon.evaluate(self.points[:, i], self.points[:, j])
        return graphon.evaluate_parts(self.parts[:, i], self.points[:, i], self.parts[:, j], self.points[:, j])


def _label_indices(graph: GraphSpec, graphon: Graphon) -> Optional[np.ndarray]:
    if not graph.is_decorated:
        return None
    if graphon.layout is None:
        raise LayoutMismatch(f"decorated graph {graph.describe()} against unpartitioned graphon '{graphon.name}'")
    return np.asarray([graphon.layout.index(graph.label(v)) for v in range(graph.n)])


def _draw(graph: GraphSpec, graphon: Graphon, rng: np.random.Generator, size: int,
          fixed: Optional[Dict[int, Tuple[int, float]]] = None) -> VertexSample:
    """Draw `size` vertex tuples; vertices in `fixed` are pinned to (part index, coordinate)."""
    labels = _label_indices(graph, graphon)
    points = lattice_uniform(rng, size * graph.n).reshape(size, graph.n)
    parts = None if labels is None else np.broadcast_to(labels, (size, graph.n)).copy()
    for v, (part, coord) in (fixed or {}).items():
        points[:, v] = coord
        if parts is not None:
            parts[:, v] = part
    return VertexSample(points, parts)


def integrand(graph: GraphSpec, graphon: Graphon, sample: VertexSample) -> np.ndarray:
    """
    Per-tuple value of sum_R (|Sym| / |Aut(R)|) prod_{edges} W prod_{non-edges} (1 - W).

    Pairs of two roots are skipped; they are accounted for by the root weight.
    """
    values: Dict[PairT, np.ndarray] = {}
    for pair in graph.pairs():
        if not graph.is_root_pair(pair):
            values[pair] = np.clip(sample.values(graphon, *pair), 0.0, 1.0)
    total = np.zeros(sample.size)
    for resolved, factor in resolution_factors(graph):
        product = np.full(sample.size, factor)
        for pair, w in values.items():
            state = resolved.state(*pair)
            if state == EdgeState.EDGE:
                product *= w
            elif state == EdgeState.NONEDGE:
                product *= 1.0 - w
        total += product
    return total


def _monte_carlo(sample_fn: Callable[[np.random.Generator, int], np.ndarray], budget: int, seed: int,
                 stream: Sequence[int], threads: Optional[int]) -> DensityEstimate:
    sizes = chunk_sizes(int(budget))
    chunks = map_chunks(lambda index, size: sample_fn(generator(seed, *stream, index), size), sizes, threads)
    return DensityEstimate.from_samples(concat(chunks))


def density(graph: GraphSpec, graphon: Graphon, budget: int = DEFAULT_BUDGET, seed: int = 0,
            method: str = MONTE_CARLO, threads: Optional[int] = None) -> DensityEstimate:
    """
    Estimate the induced density d(H, W).

    Args:
        graph (GraphSpec): Unrooted graph; decorated graphs are routed to decorated_density.
        graphon (Graphon): The graphon.
        budget (int): Number of sampled vertex tuples.
        seed (int): Root seed.
        method (str): "monte-carlo" or "quadrature".
        threads (Optional[int]): Worker cap.

    Returns:
        DensityEstimate: The estimate.
    """
    if graph.is_rooted:
        raise ValueError(f"{graph.describe()} is rooted; use rooted_density")
    if graph.is_decorated:
        return decorated_density(graph, graphon, budget, seed, method=method, threads=threads)
    if method == QUADRATURE:
        return quadrature_density(graph, graphon)
    return _monte_carlo(lambda rng, size: integrand(graph, graphon, _draw(graph, graphon, rng, size)),
                        budget, seed, (_STREAM_PLAIN,), threads)


def decorated_density(graph: GraphSpec, graphon: Graphon, budget: int = DEFAULT_BUDGET, seed: int = 0,
                      method: str = MONTE_CARLO, threads: Optional[int] = None) -> DensityEstimate:
    """
    Induced density conditioned on every vertex lying in the part named by its label.

    Raises:
        LayoutMismatch: If the graphon has no layout or a label is unknown.
    """
    require_partitioned(graphon)
    _label_indices(graph, graphon)
    if method == QUADRATURE:
        return quadrature_density(graph, graphon)
    return _monte_carlo(lambda rng, size: integrand(graph, graphon, _draw(graph, graphon, rng, size)),
                        budget, seed, (_STREAM_DECORATED,), threads)


# -- rooted densities --------------------------------------------------------------------


def _root_positions(graph: GraphSpec, graphon: Graphon, coords: Sequence[float]) -> Optional[Dict[int, Tuple[int, float]]]:
    """(part index, coordinate) of every root, or None if a root lies outside its labeled part."""
    if len(coords) != graph.m:
        raise ValueError(f"{graph.describe()} has {graph.m} roots, got {len(coords)} coordinates")
    fixed = {}
    for root, x in zip(graph.roots, coords):
        if graph.is_decorated:
            part, s = require_partitioned(graphon).locate(np.asarray([x]))
            if graph.label(root) != graphon.layout.names[int(part[0])]:
                return None
            fixed[root] = (int(part[0]), float(s[0]))
        else:
            fixed[root] = (0, float(min(max(x, 0.0), LAST_POINT)))
    return fixed


def _root_weight(graph: GraphSpec, graphon: Graphon, sample: VertexSample) -> np.ndarray:
    """c(x_1..x_m): density that the root coordinates induce H0."""
    weight = np.ones(sample.size)
    for a, b in graph.pairs():
        if not graph.is_root_pair((a, b)):
            continue
        state = graph.state(a, b)
        if state == EdgeState.FREE:
            continue
        w = np.clip(sample.values(graphon, a, b), 0.0, 1.0)
        weight *= w if state == EdgeState.EDGE else 1.0 - w
    return weight


def root_assignment(graph: GraphSpec, graphon: Graphon, coords: Sequence[float]) -> RootAssignment:
    """Pin the roots of a graph and compute the weight c of the root tuple."""
    fixed = _root_positions(graph, graphon, coords)
    if fixed is None:
        return RootAssignment(coords=tuple(float(x) for x in coords), weight=0.0)
    sample = _draw(graph, graphon, generator(0), 1, fixed)
    weight = float(_root_weight(graph, graphon, sample)[0])
    return RootAssignment(coords=tuple(float(x) for x in coords), weight=weight)


def rooted_density(graph: GraphSpec, graphon: Graphon, roots: Union[RootAssignment, Sequence[float]],
                   budget: int = DEFAULT_BUDGET, seed: int = 0, threads: Optional[int] = None,
                   stream: int = 0) -> DensityEstimate:
    """
    Conditional density of a rooted graph given the coordinates of its roots.

    Estimates ((|H| - m)! / |Aut(H)|) times the integral over the non-root coordinates of the
    edge and non-edge product, pairs between two roots excluded.

    Raises:
        RootsIncompatible: If the roots induce H0 with probability density zero.
    """
    if not graph.is_rooted:
        raise ValueError(f"{graph.describe()} has no roots")
    if not isinstance(roots, RootAssignment):
        roots = root_assignment(graph, graphon, roots)
    if roots.weight <= 0.0:
        raise RootsIncompatible(f"roots {list(roots.coords)} cannot induce the root graph of {graph.describe()}")
    fixed = _root_positions(graph, graphon, roots.coords)
    if graph.m == graph.n:
        return DensityEstimate.exact(float(resolution_factors(graph)[0][1]))

    def sample_fn(rng: np.random.Generator, size: int) -> np.ndarray:
        return integrand(graph, graphon, _draw(graph, graphon, rng, size, fixed))

    return _monte_carlo(sample_fn, budget, seed, (_STREAM_ROOTED, stream), threads)


def sample_roots(graph: GraphSpec, graphon: Graphon, count: int, seed: int) -> List[RootAssignment]:
    """
    Draw root tuples from the measure mu with density proportional to c, by rejection.

    Raises:
        RootsIncompatible: If no tuple is accepted, i.e. c vanishes almost everywhere.
    """
    if not graph.is_rooted:
        raise ValueError(f"{graph.describe()} has no roots")
    labels = _label_indices(graph, graphon)
    accepted: List[RootAssignment] = []
    for round_index in range(MAX_REJECTION_ROUNDS):
        rng = generator(seed, _STREAM_ROOT_SAMPLES, round_index)
        batch = max(4 * count, 64)
        sample = _draw(graph, graphon, rng, batch)
        weight = _root_weight(graph, graphon, sample)
        keep = np.flatnonzero(rng.random(batch) < weight)
        for row in keep:
            if len(accepted) == count:
                break
            coords = []
            for r in graph.roots:
                if labels is None:
                    coords.append(float(sample.points[row, r]))
                else:
                    coords.append(float(graphon.layout.to_global(labels[r], sample.points[row, r])))
            accepted.append(RootAssignment(coords=tuple(coords), weight=float(weight[row])))
        if len(accepted) == count:
            return accepted
    if not accepted:
        raise RootsIncompatible(f"no root tuple of {graph.describe()} induces its root graph")
    logger.warning("only %d of %d root tuples accepted for %s", len(accepted), count, graph.describe())
    return accepted


def ratio_estimate(numerator: np.ndarray, denominator: np.ndarray) -> DensityEstimate:
    """Mean ratio of paired samples with a delta-method standard error."""
    numerator = np.asarray(numerator, dtype=np.float64)
    denominator = np.asarray(denominator, dtype=np.float64)
    n = numerator.size
    mean_den = float(denominator.mean())
    if mean_den == 0.0:
        raise RootsIncompatible("the conditioning event has probability zero")
    ratio = float(numerator.mean()) / mean_den
    residual = (numerator - ratio * denominator) / mean_den
    stderr = float(residual.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return DensityEstimate(value=ratio, stderr=stderr, samples=n, kind=EstimatorKind.MONTE_CARLO)


def rooted_expectation(graph: GraphSpec, graphon: Graphon, budget: int = DEFAULT_BUDGET, seed: int = 0,
                       threads: Optional[int] = None) -> DensityEstimate:
    """
    Rooted density averaged over mu-distributed roots.

    This is the unrooted conditional density of H given that the roots induce H0.
    """
    if not graph.is_rooted:
        raise ValueError(f"{graph.describe()} has no roots")

    def sample_fn(rng: np.random.Generator, size: int) -> np.ndarray:
        sample = _draw(graph, graphon, rng, size)
        weight = _root_weight(graph, graphon, sample)
        return np.stack([weight * integrand(graph, graphon, sample), weight])

    sizes = chunk_sizes(int(budget))
    chunks = map_chunks(lambda index, size: sample_fn(generator(seed, _STREAM_EXPECTATION, index), size),
                        sizes, threads)
    stacked = np.concatenate(chunks, axis=1)
    return ratio_estimate(stacked[0], stacked[1])


# -- degrees -----------------------------------------------------------------------------


def relative_degree(graphon: Graphon, x: float, part: str, depth: Optional[int] = None) -> float:
    """
    deg_Y x = (1 / lambda(Y)) int_Y W(x, .).

    Partitioned graphons integrate analytically per kernel; other layouts fall back to a
    midpoint rule with 2^min(depth, 16) nodes.
    """
    layout = require_partitioned(graphon)
    if isinstance(graphon, PartitionedGraphon):
        idx, s = layout.locate(np.asarray([x]))
        return float(graphon.relative_degree(layout.names[int(idx[0])], s, part)[0])
    nodes = 1 << min(depth or 12, 16)
    local = (np.arange(nodes) + 0.5) / nodes
    ys = layout.to_global(np.full(nodes, layout.index(part)), local)
    return float(graphon.evaluate(np.full(nodes, float(x)), ys).mean())
