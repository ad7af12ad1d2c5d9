"""
Small labeled graphs with edge states, roots and part decorations.
"""
import itertools
import logging
import math
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import TooLarge

logger = logging.getLogger(__name__)

# Brute-force automorphism search is limited to this many vertices.
MAX_AUT_VERTICES = 8
# Free pairs are expanded into all 2^f resolutions.
MAX_FREE_PAIRS = 12

PairT = Tuple[int, int]


class EdgeState(str, Enum):
    """State of a vertex pair."""

    EDGE = "edge"
    NONEDGE = "nonedge"
    FREE = "free"


def _pair(i: int, j: int) -> PairT:
    if i == j:
        raise ValueError(f"self-loop {i}-{j} is not a vertex pair")
    return (i, j) if i < j else (j, i)


class GraphSpec(BaseModel):
    """
    A small graph H on vertices 0..n-1.

    Every pair is stored in exactly one of `edges`, `nonedges`, `free`; `default` only
    records which state was implicit when the graph was written down.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of vertices")
    roots: Tuple[int, ...] = Field((), description="Ordered root vertices")
    edges: Tuple[PairT, ...] = Field((), description="Pairs that must be edges")
    nonedges: Tuple[PairT, ...] = Field((), description="Pairs that must be non-edges")
    free: Tuple[PairT, ...] = Field((), description="Pairs that may be either")
    default: EdgeState = Field(EdgeState.NONEDGE, description="State of pairs not listed explicitly")
    decorations: Optional[Tuple[str, ...]] = Field(None, description="Part label of every vertex")
    name: Optional[str] = Field(None, description="Name in the graph vocabulary", exclude=True)

    @model_validator(mode="before")
    @classmethod
    def _complete_states(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        n = int(data["n"])
        default = EdgeState(data.get("default", EdgeState.NONEDGE))
        states: Dict[PairT, EdgeState] = {}
        for key, state in (("edges", EdgeState.EDGE), ("nonedges", EdgeState.NONEDGE), ("free", EdgeState.FREE)):
            for raw in data.get(key, ()) or ():
                i, j = int(raw[0]), int(raw[1])
                if not (0 <= i < n and 0 <= j < n):
                    raise ValueError(f"pair {i}-{j} out of range for {n} vertices")
                pair = _pair(i, j)
                if states.get(pair, state) != state:
                    raise ValueError(f"pair {pair[0]}-{pair[1]} has conflicting states")
                states[pair] = state
        for pair in itertools.combinations(range(n), 2):
            states.setdefault(pair, default)
        for key, state in (("edges", EdgeState.EDGE), ("nonedges", EdgeState.NONEDGE), ("free", EdgeState.FREE)):
            data[key] = tuple(sorted(p for p, s in states.items() if s == state))
        roots = tuple(int(r) for r in data.get("roots", ()) or ())
        if len(set(roots)) != len(roots) or any(not 0 <= r < n for r in roots):
            raise ValueError(f"roots {roots} must be distinct vertices of a {n}-vertex graph")
        data["roots"] = roots
        decorations = data.get("decorations")
        if decorations is not None:
            decorations = tuple(str(label) for label in decorations)
            if len(decorations) != n:
                raise ValueError("every vertex needs a part label")
            data["decorations"] = decorations
        data["default"] = default
        return data

    # -- basic queries -----------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.roots)

    @property
    def is_rooted(self) -> bool:
        return bool(self.roots)

    @property
    def is_decorated(self) -> bool:
        return self.decorations is not None

    @property
    def non_roots(self) -> List[int]:
        return [v for v in range(self.n) if v not in self.roots]

    def pairs(self) -> List[PairT]:
        return list(itertools.combinations(range(self.n), 2))

    def state(self, i: int, j: int) -> EdgeState:
        pair = _pair(i, j)
        if pair in self.edges:
            return EdgeState.EDGE
        if pair in self.nonedges:
            return EdgeState.NONEDGE
        return EdgeState.FREE

    def label(self, v: int) -> Optional[str]:
        return None if self.decorations is None else self.decorations[v]

    def is_root_pair(self, pair: PairT) -> bool:
        return pair[0] in self.roots and pair[1] in self.roots

    # -- derived graphs ----------------------------------------------------------------

    def resolutions(self) -> Iterator["GraphSpec"]:
        """
        All graphs obtained by fixing every free pair to edge or non-edge.

        Free pairs between two roots stay free: they only constrain the root tuple, which
        rooted densities condition on.
        """
        open_pairs = tuple(p for p in self.free if not self.is_root_pair(p))
        kept = tuple(p for p in self.free if self.is_root_pair(p))
        if len(open_pairs) > MAX_FREE_PAIRS:
            raise TooLarge(f"{len(open_pairs)} free pairs exceed the limit of {MAX_FREE_PAIRS}")
        for choice in itertools.product((True, False), repeat=len(open_pairs)):
            chosen = [p for p, on in zip(open_pairs, choice) if on]
            dropped = [p for p, on in zip(open_pairs, choice) if not on]
            yield GraphSpec(n=self.n, roots=self.roots, edges=self.edges + tuple(chosen),
                            nonedges=self.nonedges + tuple(dropped), free=kept,
                            default=EdgeState.NONEDGE, decorations=self.decorations)

    def root_graph(self) -> "GraphSpec":
        """The graph H0 induced on the roots, relabeled 0..m-1 in root order."""
        index = {r: i for i, r in enumerate(self.roots)}
        edges, nonedges, free = [], [], []
        for a, b in itertools.combinations(self.roots, 2):
            target = {EdgeState.EDGE: edges, EdgeState.NONEDGE: nonedges, EdgeState.FREE: free}[self.state(a, b)]
            target.append((index[a], index[b]))
        labels = None if self.decorations is None else tuple(self.decorations[r] for r in self.roots)
        return GraphSpec(n=self.m, roots=tuple(range(self.m)), edges=tuple(edges), nonedges=tuple(nonedges),
                         free=tuple(free), decorations=labels)

    def to_networkx(self) -> nx.Graph:
        """Complete graph whose edges carry the pair states and whose nodes carry labels and root slots."""
        graph = nx.Graph()
        for v in range(self.n):
            graph.add_node(v, label=self.label(v), root=self.roots.index(v) if v in self.roots else -1)
        for i, j in self.pairs():
            graph.add_edge(i, j, state=self.state(i, j).value)
        return graph

    # -- counting ----------------------------------------------------------------------

    def aut_count(self) -> int:
        """
        Number of automorphisms preserving pair states and labels and fixing every root.

        Raises:
            TooLarge: For graphs with more than 8 vertices.
        """
        if self.n > MAX_AUT_VERTICES:
            raise TooLarge(f"automorphism search limited to {MAX_AUT_VERTICES} vertices, got {self.n}")
        return _aut_count(self)

    def sym_count(self) -> int:
        """Number of vertex permutations preserving labels and fixing the roots."""
        classes: Dict[Optional[str], int] = {}
        for v in self.non_roots:
            classes[self.label(v)] = classes.get(self.label(v), 0) + 1
        return math.prod(math.factorial(c) for c in classes.values())

    def density_factor(self) -> float:
        """|Sym(H)| / |Aut(H)|, the multiplicity of the labeled integral in d(H, W)."""
        return self.sym_count() / self.aut_count()

    def describe(self) -> str:
        return self.name or f"graph(n={self.n}, roots={list(self.roots)})"


@lru_cache(maxsize=4096)
def _aut_count(graph: GraphSpec) -> int:
    nxg = graph.to_networkx()
    matcher = GraphMatcher(
        nxg, nxg,
        node_match=lambda a, b: a["label"] == b["label"] and a["root"] == b["root"],
        edge_match=lambda a, b: a["state"] == b["state"],
    )
    return sum(1 for _ in matcher.isomorphisms_iter())


def resolution_factors(graph: GraphSpec) -> List[Tuple[GraphSpec, float]]:
    """Resolutions of a graph with their |Sym| / |Aut| factors."""
    return _resolution_factors(graph)


@lru_cache(maxsize=1024)
def _resolution_factors(graph: GraphSpec) -> List[Tuple[GraphSpec, float]]:
    return [(r, r.density_factor()) for r in graph.resolutions()]
