"""
W-random graphs and induced densities of finite graphs.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, Optional

import networkx as nx
import numpy as np

from src.density.engine import DEFAULT_BUDGET
from src.density.streams import chunk_sizes, generator, lattice_uniform, map_chunks
from src.exceptions import TooLarge
from src.graph.graph_spec import EdgeState, GraphSpec
from src.graphon.core import Graphon
from src.state.models import DensityEstimate
from src.tools.file_utils import write_file

logger = logging.getLogger(__name__)

# Exact enumeration of vertex subsets up to this many subsets.
MAX_EXACT_SUBSETS = 1_000_000
# Orders of sampled graphs kept in memory.
MAX_ORDER = 10_000
# Largest pattern graph for empirical densities.
MAX_PATTERN = 6
# Rows of the adjacency matrix sampled per work unit.
ROW_BLOCK = 64

_STREAM_LATENTS = 0
_STREAM_ROWS = 1
_STREAM_SUBSETS = 2


@dataclass(frozen=True)
class SampledGraph:
    """
    A W-random graph.

    Attributes:
        n (int): Order.
        adjacency (np.ndarray): Symmetric boolean matrix with an empty diagonal.
        latents (np.ndarray): The sampled coordinates of the vertices.
        seed (int): Seed the graph was drawn with.
        graphon (str): Name of the graphon.
    """

    n: int
    adjacency: np.ndarray
    latents: np.ndarray
    seed: int
    graphon: str = "graphon"

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, 1)))

    @property
    def edge_density(self) -> float:
        return self.edge_count / math.comb(self.n, 2) if self.n > 1 else 0.0

    def to_networkx(self) -> nx.Graph:
        """The graph with the latent coordinate stored on every node."""
        graph = nx.Graph(graphon=self.graphon, seed=self.seed)
        graph.add_nodes_from((v, {"latent": float(x)}) for v, x in enumerate(self.latents))
        rows, cols = np.nonzero(np.triu(self.adjacency, 1))
        graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
        return graph

    def write_edgelist(self, path: str) -> None:
        """Write 'i j' lines, one per edge, in row-major order."""
        header = f"# {self.graphon} n={self.n} seed={self.seed} edges={self.edge_count}\n"
        lines = nx.generate_edgelist(self.to_networkx(), data=False)
        write_file(path, header + "".join(f"{line}\n" for line in lines))


def sample(w: Graphon, n: int, seed: int, threads: Optional[int] = None) -> SampledGraph:
    """
    Draw a W-random graph of order n.

    Latents are uniform on the lattice; row i draws the pairs (i, j), j > i, from its own
    counter-based stream, so the graph does not depend on how rows are split across workers.

    Args:
        w (Graphon): The graphon.
        n (int): Order.
        seed (int): Root seed.
        threads (Optional[int]): Worker cap.

    Returns:
        SampledGraph: The graph.
    """
    if n < 1:
        raise ValueError("a sampled graph needs at least one vertex")
    if n > MAX_ORDER:
        raise TooLarge(f"graphs are kept in memory up to order {MAX_ORDER}, got {n}")
    latents = lattice_uniform(generator(seed, _STREAM_LATENTS), n)
    adjacency = np.zeros((n, n), dtype=bool)

    def fill(block: int, size: int) -> None:
        for i in range(block * ROW_BLOCK, block * ROW_BLOCK + size):
            others = latents[i + 1:]
            if not others.size:
                continue
            p = w.evaluate(np.full(others.shape, latents[i]), others)
            adjacency[i, i + 1:] = generator(seed, _STREAM_ROWS, i).random(others.size) < p

    map_chunks(fill, chunk_sizes(n, ROW_BLOCK), threads)
    adjacency |= adjacency.T
    graph = SampledGraph(n=n, adjacency=adjacency, latents=latents, seed=seed, graphon=w.name)
    logger.debug("Sampled %s graph of order %d with %d edges", w.name, n, graph.edge_count)
    return graph


# -- empirical densities ---------------------------------------------------------------------


def _pair_positions(k: int) -> Dict[tuple, int]:
    return {pair: p for p, pair in enumerate(itertools.combinations(range(k), 2))}


class PatternWeights:
    """
    Contribution of an induced labelled k-vertex graph to d(H, G).

    For the graph c induced by an ordered k-subset, the weight is the number of
    permutations sigma with c^sigma compatible with H, divided by |Aut(c)|; a subset
    contributes once for every resolution of H isomorphic to its induced graph.
    """

    def __init__(self, pattern: GraphSpec):
        k = pattern.n
        self.k = k
        self.positions = _pair_positions(k)
        self.perms = np.asarray(list(itertools.permutations(range(k))), dtype=np.int64)
        pairs = list(self.positions)
        self._pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        states = [pattern.state(i, j) for i, j in pairs]
        self._edge = np.asarray([s == EdgeState.EDGE for s in states])
        self._nonedge = np.asarray([s == EdgeState.NONEDGE for s in states])
        self._cache: Dict[int, float] = {}

    def _permuted_bits(self, code: int) -> np.ndarray:
        adjacency = np.zeros((self.k, self.k), dtype=bool)
        for (i, j), p in self.positions.items():
            adjacency[i, j] = adjacency[j, i] = bool(code >> p & 1)
        a = self.perms[:, self._pairs[:, 0]]
        b = self.perms[:, self._pairs[:, 1]]
        return adjacency[a, b]

    def weight(self, code: int) -> float:
        if code not in self._cache:
            bits = self._permuted_bits(code)
            compatible = np.all(bits | ~self._edge, axis=1) & np.all(~bits | ~self._nonedge, axis=1)
            original = np.asarray([bool(code >> p & 1) for p in range(len(self.positions))])
            automorphisms = int(np.count_nonzero(np.all(bits == original, axis=1)))
            self._cache[code] = int(np.count_nonzero(compatible)) / automorphisms
        return self._cache[code]

    def weights(self, codes: np.ndarray) -> np.ndarray:
        unique, inverse = np.unique(codes, return_inverse=True)
        return np.asarray([self.weight(int(c)) for c in unique])[inverse]


def subset_codes(adjacency: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    """Bit code of the graph induced by every ordered subset (bit p set iff the p-th pair is an edge)."""
    k = subsets.shape[1]
    codes = np.zeros(subsets.shape[0], dtype=np.int64)
    for (i, j), p in _pair_positions(k).items():
        codes |= adjacency[subsets[:, i], subsets[:, j]].astype(np.int64) << p
    return codes


def _all_subsets(n: int, k: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    combos = itertools.combinations(range(n), k)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, chunk)), dtype=np.int64)
        if not block.size:
            return
        yield block.reshape(-1, k)


def _random_subsets(rng: np.random.Generator, n: int, k: int, size: int) -> np.ndarray:
    """Uniform k-subsets of distinct vertices, by rejection of tuples with repeats."""
    kept = []
    missing = size
    while missing > 0:
        draw = rng.integers(0, n, size=(max(missing, 1024), k))
        ordered = np.sort(draw, axis=1)
        distinct = draw[np.all(np.diff(ordered, axis=1) > 0, axis=1)][:missing]
        kept.append(distinct)
        missing -= distinct.shape[0]
    return np.concatenate(kept)


def empirical_density(g: SampledGraph, h: GraphSpec, budget: int = DEFAULT_BUDGET, seed: int = 0,
                      threads: Optional[int] = None) -> DensityEstimate:
    """
    Probability that |H| distinct random vertices of G induce (a resolution of) H.

    All subsets are enumerated when there are at most 10^6 of them; otherwise `budget`
    subsets are sampled.

    Args:
        g (SampledGraph): The host graph.
        h (GraphSpec): Unrooted, undecorated pattern.
        budget (int): Subsets sampled when enumeration is too large.
        seed (int): Root seed.
        threads (Optional[int]): Worker cap.

    Returns:
        DensityEstimate: Exact for enumeration (and for |H| > |G|, where the density is 0).
    """
    if h.is_rooted or h.is_decorated:
        raise ValueError(f"{h.describe()}: empirical densities need an unrooted, undecorated graph")
    if h.n > MAX_PATTERN:
        raise TooLarge(f"patterns are limited to {MAX_PATTERN} vertices")
    if h.n > g.n:
        return DensityEstimate.exact(0.0)
    weights = PatternWeights(h)
    total = math.comb(g.n, h.n)
    if total <= MAX_EXACT_SUBSETS:
        hits = sum(float(weights.weights(subset_codes(g.adjacency, block)).sum())
                   for block in _all_subsets(g.n, h.n))
        return DensityEstimate.exact(hits / total, cells=total)

    def chunk(index: int, size: int) -> np.ndarray:
        subsets = _random_subsets(generator(seed, _STREAM_SUBSETS, index), g.n, h.n, size)
        return weights.weights(subset_codes(g.adjacency, subsets))

    values = np.concatenate(map_chunks(chunk, chunk_sizes(budget), threads))
    return DensityEstimate.from_samples(values)
