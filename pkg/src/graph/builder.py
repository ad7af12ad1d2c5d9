"""
Construction of small graphs and the named graph vocabulary used by constraint files.
"""
import itertools
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.graph.graph_spec import EdgeState, GraphSpec

logger = logging.getLogger(__name__)


class GraphBuilder:
    """
    Fluent construction of a GraphSpec.

    Example:
        GraphBuilder(3).edge(0, 1).edge(1, 2).build()
    """

    def __init__(self, n: int, default: EdgeState = EdgeState.NONEDGE):
        self.n = n
        self._default = EdgeState(default)
        self._edges: List[Tuple[int, int]] = []
        self._nonedges: List[Tuple[int, int]] = []
        self._free: List[Tuple[int, int]] = []
        self._roots: Tuple[int, ...] = ()
        self._labels: Optional[Tuple[str, ...]] = None
        self._name: Optional[str] = None

    def edge(self, i: int, j: int) -> "GraphBuilder":
        self._edges.append((i, j))
        return self

    def edges(self, pairs: Iterable[Tuple[int, int]]) -> "GraphBuilder":
        for i, j in pairs:
            self.edge(i, j)
        return self

    def nonedge(self, i: int, j: int) -> "GraphBuilder":
        self._nonedges.append((i, j))
        return self

    def free(self, i: int, j: int) -> "GraphBuilder":
        self._free.append((i, j))
        return self

    def roots(self, *roots: int) -> "GraphBuilder":
        self._roots = tuple(roots)
        return self

    def parts(self, *labels: str) -> "GraphBuilder":
        self._labels = tuple(labels)
        return self

    def named(self, name: str) -> "GraphBuilder":
        self._name = name
        return self

    def build(self) -> GraphSpec:
        return GraphSpec(
            n=self.n, roots=self._roots, edges=tuple(self._edges), nonedges=tuple(self._nonedges),
            free=tuple(self._free), default=self._default, decorations=self._labels, name=self._name,
        )


def complete(n: int) -> GraphSpec:
    return GraphBuilder(n, EdgeState.EDGE).named(f"K{n}").build()


def independent(n: int) -> GraphSpec:
    return GraphBuilder(n).named(f"I{n}").build()


def path(n: int) -> GraphSpec:
    return GraphBuilder(n).edges((i, i + 1) for i in range(n - 1)).named(f"P{n}").build()


def cycle(n: int) -> GraphSpec:
    return GraphBuilder(n).edges((i, (i + 1) % n) for i in range(n)).named(f"C{n}").build()


def decorated_edge(x: str, y: str) -> GraphSpec:
    """A single edge whose endpoints are labeled with parts x and y."""
    return GraphBuilder(2).edge(0, 1).parts(x, y).named(f"edge[{x},{y}]").build()


def _disjoint_edges_free() -> GraphSpec:
    return GraphBuilder(4, EdgeState.FREE).edge(0, 1).edge(2, 3).named("K2x2-disjoint-free").build()


def _rooted_edge() -> GraphSpec:
    return GraphBuilder(2).edge(0, 1).roots(0).named("K2r").build()


def _rooted_cherry() -> GraphSpec:
    return GraphBuilder(3).free(0, 1).edge(0, 2).edge(1, 2).roots(0, 1).named("cherry-rr").build()


def _rooted_vertex() -> GraphSpec:
    return GraphBuilder(1).roots(0).named("K1r").build()


VOCABULARY: Dict[str, Callable[[], GraphSpec]] = {
    **{f"K{n}": (lambda n=n: complete(n)) for n in range(1, 7)},
    **{f"I{n}": (lambda n=n: independent(n)) for n in range(2, 5)},
    "P3": lambda: path(3),
    "P4": lambda: path(4),
    "C4": lambda: cycle(4),
    "C5": lambda: cycle(5),
    "K2x2-disjoint-free": _disjoint_edges_free,
    "K1r": _rooted_vertex,
    "K2r": _rooted_edge,
    "cherry-rr": _rooted_cherry,
}


def named_graph(name: str) -> GraphSpec:
    """
    Look up a graph of the built-in vocabulary.

    Raises:
        KeyError: For names outside the vocabulary.
    """
    if name not in VOCABULARY:
        raise KeyError(f"unknown graph '{name}'")
    return VOCABULARY[name]()


def from_adjacency_code(n: int, code: int, roots: Sequence[int] = ()) -> GraphSpec:
    """Fully specified graph whose edge set is the bitmask `code` over pairs in lexicographic order."""
    pairs = list(itertools.combinations(range(n), 2))
    edges = [p for bit, p in enumerate(pairs) if code >> bit & 1]
    return GraphSpec(n=n, roots=tuple(roots), edges=tuple(edges), default=EdgeState.NONEDGE)


def canonical_code(n: int, code: int) -> int:
    """Smallest adjacency code over all relabelings; equal exactly for isomorphic graphs."""
    pairs = list(itertools.combinations(range(n), 2))
    adjacency = {p for bit, p in enumerate(pairs) if code >> bit & 1}
    best = None
    for perm in itertools.permutations(range(n)):
        relabeled = 0
        for bit, (i, j) in enumerate(pairs):
            a, b = perm[i], perm[j]
            if (min(a, b), max(a, b)) in adjacency:
                relabeled |= 1 << bit
        best = relabeled if best is None else min(best, relabeled)
    return best


def graph_types(n: int) -> List[GraphSpec]:
    """
    One representative of every isomorphism type of plain graphs on n vertices.

    Intended for n <= 5.
    """
    if n > 5:
        raise ValueError("isomorphism type enumeration is limited to 5 vertices")
    seen = set()
    types = []
    for code in range(1 << (n * (n - 1) // 2)):
        canon = canonical_code(n, code)
        if canon not in seen:
            seen.add(canon)
            types.append(from_adjacency_code(n, canon))
    logger.debug("%d isomorphism types on %d vertices", len(types), n)
    return types
