"""
The hypercubical graphon.

Fourteen parts A0..A3, B1..B5, C, D, E1, E2, F, all of measure 1/27 except
E1 (11/27) and E2 (4/27). Kernels on scaled coordinates:

    A0xA1                      1 iff t <= 1/2
    A1x{A1,A2,B1..B5}, A2xA3, A2xB2   diagonal checker
    Cx{A0..A3,B2..B5,C}        half graphon
    A1xA3                      shifted checker, level(s) = level(t) + 1
    CxB1                       1 iff u(t) + s >= 1, u placing the first recipe coordinate
                               of t inside the level of t
    B1xB1                      product order of recipe coordinates
    B1xB2, B1xB3, B1xB4, B1xB5 coordinate, stairs and product kernels
    DxB1, DxB2, DxB4, DxB5     the same against the infinite recipe of the D vertex
    E1x{A0..C}                 1 - deg_I(t), I the union of A0..C and D
    E2xD                       1 - (deg_B1 + deg_B2 + deg_B4 + deg_B5)(t) / 4
    Fx{A1..C}                  constants 1/10 .. 9/10

Every other pair is zero. The E rows make the degree of every vertex of A0..C equal to
11/27 + deg_F / 27 and the degree of every vertex of D equal to 4/27.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from src.density.streams import generator, lattice_uniform
from src.geometry.dyadic import level_measure as unit_level_measure
from src.graphon.core import PartitionedLayout
from src.graphon.kernels import (
    MAX_LEVEL,
    CheckerKernel,
    ConstantKernel,
    FirstLevelKernel,
    HalfKernel,
    PairKernel,
    ShiftedCheckerKernel,
    lattice_levels,
    level_overlap,
)
from src.graphon.partitioned import Pair, PartitionedGraphon, mutation_kernel
from src.recipe.interleave import INFINITY, Recipe
from src.state.models import DensityEstimate, PartSpec

logger = logging.getLogger(__name__)

PART_NAMES = ("A0", "A1", "A2", "A3", "B1", "B2", "B3", "B4", "B5", "C", "D", "E1", "E2", "F")
CORE_PARTS = ("A0", "A1", "A2", "A3", "B1", "B2", "B3", "B4", "B5", "C")
INNER_PARTS = CORE_PARTS + ("D",)
LEVELED_PARTS = ("A1", "A2", "A3", "B1", "B2", "B3", "B4", "B5")
D_NEIGHBOURS = ("B1", "B2", "B4", "B5")
CHECKER_PAIRS = (("A1", "A1"), ("A1", "A2"), ("A1", "B1"), ("A1", "B2"), ("A1", "B3"), ("A1", "B4"),
                 ("A1", "B5"), ("A2", "A3"), ("A2", "B2"))
HALF_COLUMNS = ("A0", "A1", "A2", "A3", "B2", "B3", "B4", "B5", "C")
F_COLUMNS = ("A1", "A2", "A3", "B1", "B2", "B3", "B4", "B5", "C")

PART_MEASURES: Dict[str, Fraction] = {name: Fraction(1, 27) for name in PART_NAMES}
PART_MEASURES.update({"E1": Fraction(11, 27), "E2": Fraction(4, 27)})

# Pseudorandom densities between F and the core parts.
F_DENSITIES: Dict[str, Fraction] = {"A0": Fraction(0)}
F_DENSITIES.update({name: Fraction(i, 10) for i, name in enumerate(F_COLUMNS, start=1)})

PART_DEGREES: Dict[str, Fraction] = {name: Fraction(110 + i, 270) for i, name in enumerate(CORE_PARTS)}
PART_DEGREES.update({"D": Fraction(40, 270), "F": Fraction(45, 270)})

# Closed forms of the E1 / E2 degrees obtained from the exact block densities.
E1_DEGREE = Fraction(206, 693)
E2_DEGREE = Fraction(5, 216)


# -- recipe helpers ------------------------------------------------------------------


def _as_array(s) -> np.ndarray:
    return np.atleast_1d(np.asarray(s, dtype=np.float64))


def level_coordinates(recipe: Recipe, s: np.ndarray, width: Optional[int] = None
                      ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Level k, relative position rho and r_k(rho) for scaled coordinates of a leveled part.

    Returns:
        Tuple: (k, rho, coords) with coords zero-padded to `width` columns.
    """
    k, rel = lattice_levels(_as_array(s))
    rel_int = np.floor(rel * float(1 << recipe.precision)).astype(np.int64)
    if width is None:
        width = int(k.max()) if k.size else 1
    return k, rel, recipe.apply_lattice(k, rel_int, max(width, 1))


def infinite_coordinates(recipe: Recipe, s: np.ndarray, width: int) -> np.ndarray:
    """Prefix (r_infinity(s))_1..width for scaled coordinates of D."""
    s = np.clip(_as_array(s), 0.0, 1.0)
    a = np.minimum(np.floor(s * float(1 << recipe.precision)), float((1 << recipe.precision) - 1))
    return recipe.apply_lattice(INFINITY, a.astype(np.int64), width)


def gather(columns: np.ndarray, index: np.ndarray) -> np.ndarray:
    """columns[row, index[row] - 1], with out-of-range indices clipped to the last column."""
    idx = np.clip(np.asarray(index, dtype=np.int64) - 1, 0, columns.shape[1] - 1)
    return columns[np.arange(columns.shape[0]), idx]


def product_tail(m: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """
    P(U_1 ... U_m >= rho) for independent uniforms: 1 - rho * sum_{j<m} (-ln rho)^j / j!.
    """
    rho = _as_array(rho)
    m = np.broadcast_to(np.asarray(m, dtype=np.int64), rho.shape)
    out = np.ones_like(rho)
    positive = rho > 0
    if not np.any(positive):
        return out
    log_term = -np.log(rho[positive])
    mm = m[positive]
    term = np.ones_like(log_term)
    acc = np.zeros_like(log_term)
    for j in range(int(mm.max())):
        acc += np.where(j < mm, term, 0.0)
        term = term * log_term / (j + 1)
    out[positive] = 1.0 - rho[positive] * acc
    return np.clip(out, 0.0, 1.0)


def _level_weights(width: int) -> np.ndarray:
    return np.ldexp(1.0, -np.arange(1, width + 1))


# -- recipe kernels ------------------------------------------------------------------


class InitialCoordinateKernel(PairKernel):
    """CxB1: 1 iff u(t) + s >= 1 with u(t) = 1 - 2^{1-k} + (r_k(rho))_1 2^{-k}."""

    name = "initial-coordinate"

    def __init__(self, recipe: Recipe):
        self.recipe = recipe

    def u(self, t: np.ndarray) -> np.ndarray:
        k, _, c = level_coordinates(self.recipe, t, width=1)
        return 1.0 - np.ldexp(1.0, 1 - k) + np.ldexp(c[:, 0], -k)

    def values(self, s, t):
        return (self.u(t) + _as_array(s) >= 1.0).astype(np.float64)

    def row_degree(self, s):
        return _as_array(s).copy()

    def col_degree(self, t):
        return self.u(t)

    def row_level_degree(self, s, m):
        return level_overlap(1.0 - _as_array(s), m)

    def col_level_degree(self, t, m):
        return level_overlap(1.0 - self.u(t), m)

    def density(self):
        return Fraction(1, 2)


class ProjectionOrderKernel(PairKernel):
    """
    B1xB1: 1 iff the recipe coordinates of the lower-level vertex are dominated by (or, on
    equal levels, comparable with) the coordinates of the other vertex.
    """

    name = "projection-order"
    symmetric = True

    def __init__(self, recipe: Recipe):
        self.recipe = recipe

    def values(self, s, t):
        s, t = _as_array(s), _as_array(t)
        ks, _ = lattice_levels(s)
        kt, _ = lattice_levels(t)
        width = int(max(ks.max(initial=1), kt.max(initial=1)))
        _, _, cs = level_coordinates(self.recipe, s, width)
        _, _, ct = level_coordinates(self.recipe, t, width)
        below = np.all(cs <= ct, axis=1)
        above = np.all(cs >= ct, axis=1)
        value = np.where(ks < kt, below, np.where(ks > kt, above, below | above))
        return value.astype(np.float64)

    def row_level_degree(self, s, m):
        s = _as_array(s)
        k, _, c = level_coordinates(self.recipe, s, width=None)
        width = max(c.shape[1], m)
        k, _, c = level_coordinates(self.recipe, s, width)
        lower = np.cumprod(c, axis=1)
        upper = np.prod(1.0 - c, axis=1)
        p_m = lower[:, m - 1]
        p_k = gather(lower, k)
        return np.where(m < k, p_m, np.where(m == k, p_k + upper, upper))

    def row_degree(self, s):
        k, _, c = level_coordinates(self.recipe, s)
        width = c.shape[1]
        lower = np.cumprod(c, axis=1)
        upper = np.prod(1.0 - c, axis=1)
        m = np.arange(1, width + 1)
        below = (lower * _level_weights(width) * (m[None, :] < k[:, None])).sum(axis=1)
        return below + np.ldexp(gather(lower, k) + 2.0 * upper, -k)

    col_degree = row_degree
    col_level_degree = row_level_degree

    def density(self):
        return Fraction(4, 7)


class CoordinateKernel(PairKernel):
    """B1xB2: 1 iff level(s) >= level(t) = m and rho(t) <= (r_level(s))_m."""

    name = "coordinate"

    def __init__(self, recipe: Recipe):
        self.recipe = recipe

    def values(self, s, t):
        ks, _, cs = level_coordinates(self.recipe, s)
        kt, rho = lattice_levels(_as_array(t))
        return ((ks >= kt) & (rho <= gather(cs, kt))).astype(np.float64)

    def row_level_degree(self, s, m):
        k, _, c = level_coordinates(self.recipe, s)
        if m > c.shape[1]:
            return np.zeros(k.shape)
        return np.where(m <= k, c[:, m - 1], 0.0)

    def row_degree(self, s):
        _, _, c = level_coordinates(self.recipe, s)
        return c @ _level_weights(c.shape[1])

    def col_degree(self, t):
        m, rho = lattice_levels(_as_array(t))
        return np.ldexp(1.0 - rho, 1 - m)

    def col_level_degree(self, t, k):
        m, rho = lattice_levels(_as_array(t))
        return np.where(k >= m, 1.0 - rho, 0.0)

    def density(self):
        return Fraction(1, 3)


class StairsKernel(PairKernel):
    """B1xB3: 1 iff level(s) >= level(t)."""

    name = "stairs"

    def values(self, s, t):
        return (lattice_levels(_as_array(s))[0] >= lattice_levels(_as_array(t))[0]).astype(np.float64)

    def row_degree(self, s):
        return 1.0 - np.ldexp(1.0, -lattice_levels(_as_array(s))[0])

    def col_degree(self, t):
        return np.ldexp(1.0, 1 - lattice_levels(_as_array(t))[0])

    def row_level_degree(self, s, m):
        return (lattice_levels(_as_array(s))[0] >= m).astype(np.float64)

    def col_level_degree(self, t, k):
        return (k >= lattice_levels(_as_array(t))[0]).astype(np.float64)

    def density(self):
        return Fraction(2, 3)


class ProductKernel(PairKernel):
    """
    B1xB4 (complement=False) and B1xB5 (complement=True): 1 iff level(s) >= level(t) = m and
    rho(t) <= prod_{i<=m} c_i (resp. prod (1 - c_i)), c = r_level(s)(rho(s)).
    """

    def __init__(self, recipe: Recipe, complement: bool = False):
        self.recipe = recipe
        self.complement = complement
        self.name = "co-product" if complement else "product"

    def _prefix_products(self, s: np.ndarray, width: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        k, _, c = level_coordinates(self.recipe, s, width)
        factors = 1.0 - c if self.complement else c
        return k, np.cumprod(factors, axis=1)

    def values(self, s, t):
        ks, prods = self._prefix_products(s)
        kt, rho = lattice_levels(_as_array(t))
        return ((ks >= kt) & (rho <= gather(prods, kt))).astype(np.float64)

    def row_level_degree(self, s, m):
        k, prods = self._prefix_products(s, None)
        if m > prods.shape[1]:
            return np.zeros(k.shape)
        return np.where(m <= k, prods[:, m - 1], 0.0)

    def row_degree(self, s):
        k, prods = self._prefix_products(s)
        m = np.arange(1, prods.shape[1] + 1)
        return (prods * _level_weights(prods.shape[1]) * (m[None, :] <= k[:, None])).sum(axis=1)

    def col_degree(self, t):
        m, rho = lattice_levels(_as_array(t))
        return np.ldexp(product_tail(m, rho), 1 - m)

    def col_level_degree(self, t, k):
        m, rho = lattice_levels(_as_array(t))
        return np.where(k >= m, product_tail(m, rho), 0.0)

    def density(self):
        return Fraction(2, 7)


class InfiniteBoxKernel(PairKernel):
    """DxB1: 1 iff (r_k(rho(t)))_i <= (r_infinity(s))_i for every i <= k = level(t)."""

    name = "infinite-box"

    def __init__(self, recipe: Recipe):
        self.recipe = recipe
        self.populated = recipe.populated_coordinates(INFINITY)

    def values(self, s, t):
        kt, _, ct = level_coordinates(self.recipe, t)
        d = infinite_coordinates(self.recipe, s, ct.shape[1])
        return np.all(ct <= d, axis=1).astype(np.float64)

    def row_level_degree(self, s, m):
        d = infinite_coordinates(self.recipe, s, m)
        return np.prod(d, axis=1)

    def row_degree(self, s):
        width = max(self.populated, 1)
        d = infinite_coordinates(self.recipe, s, width)
        return np.cumprod(d, axis=1) @ _level_weights(width)

    def col_degree(self, t):
        _, _, c = level_coordinates(self.recipe, t)
        return np.prod(1.0 - c, axis=1)

    def col_level_degree(self, t, m):
        return self.col_degree(t)

    def density(self):
        return Fraction(1, 3)


class InfiniteCoordinateKernel(PairKernel):
    """DxB2: 1 iff rho(t) <= (r_infinity(s))_level(t)."""

    name = "infinite-coordinate"

    def __init__(self, recipe: Recipe):
        self.recipe = recipe
        self.populated = recipe.populated_coordinates(INFINITY)

    def values(self, s, t):
        m, rho = lattice_levels(_as_array(t))
        d = infinite_coordinates(self.recipe, s, int(m.max(initial=1)))
        return (rho <= gather(d, m)).astype(np.float64)

    def row_level_degree(self, s, m):
        return infinite_coordinates(self.recipe, s, m)[:, m - 1]

    def row_degree(self, s):
        width = max(self.populated, 1)
        return infinite_coordinates(self.recipe, s, width) @ _level_weights(width)

    def col_degree(self, t):
        return 1.0 - lattice_levels(_as_array(t))[1]

    def col_level_degree(self, t, m):
        return self.col_degree(t)

    def density(self):
        return Fraction(1, 2)


class InfiniteProductKernel(PairKernel):
    """DxB4 / DxB5: 1 iff rho(t) <= prod_{i<=level(t)} d_i (resp. 1 - d_i), d = r_infinity(s)."""

    def __init__(self, recipe: Recipe, complement: bool = False):
        self.recipe = recipe
        self.complement = complement
        self.name = "infinite-co-product" if complement else "infinite-product"

    def _prefix_products(self, s: np.ndarray, width: int) -> np.ndarray:
        d = infinite_coordinates(self.recipe, s, width)
        return np.cumprod(1.0 - d if self.complement else d, axis=1)

    def values(self, s, t):
        m, rho = lattice_levels(_as_array(t))
        prods = self._prefix_products(s, int(m.max(initial=1)))
        return (rho <= gather(prods, m)).astype(np.float64)

    def row_level_degree(self, s, m):
        return self._prefix_products(s, m)[:, m - 1]

    def row_degree(self, s):
        return self._prefix_products(s, MAX_LEVEL) @ _level_weights(MAX_LEVEL)

    def col_degree(self, t):
        m, rho = lattice_levels(_as_array(t))
        return product_tail(m, rho)

    def col_level_degree(self, t, m):
        return self.col_degree(t)

    def density(self):
        return Fraction(1, 3)


class ComplementDegreeKernel(PairKernel):
    """
    E-row kernel 1 - deg(t), where deg is a relative degree of the column vertex; constant
    along the E part.
    """

    zero_one = False

    def __init__(self, name: str, degree_fn, mean_degree: Fraction):
        self.name = name
        self._degree_fn = degree_fn
        self.mean_degree = Fraction(mean_degree)

    def values(self, s, t):
        return 1.0 - self._degree_fn(_as_array(t)) * np.ones(np.shape(s))

    def row_degree(self, s):
        return np.full(_as_array(s).shape, float(1 - self.mean_degree))

    def col_degree(self, t):
        return 1.0 - self._degree_fn(_as_array(t))

    def col_level_degree(self, t, m):
        return self.col_degree(t)

    def density(self):
        return 1 - self.mean_degree


# -- assembly ------------------------------------------------------------------------


@dataclass
class DegreeProfile:
    """Relative degrees of one vertex in every part, and its total degree."""

    part: str
    t: float
    per_part: Dict[str, float] = field(default_factory=dict)
    total: float = 0.0

    def to_dict(self) -> Dict[str, object]:
        return {"part": self.part, "t": self.t, "per_part": dict(self.per_part), "total": self.total}


def hypercube_layout() -> PartitionedLayout:
    expected = dict(PART_DEGREES)
    expected.update({"E1": E1_DEGREE, "E2": E2_DEGREE})
    return PartitionedLayout(
        [PartSpec(name=name, measure=PART_MEASURES[name], degree=float(expected[name])) for name in PART_NAMES],
        require_degrees=True,
    )


def base_kernels(recipe: Recipe) -> Dict[Pair, PairKernel]:
    """Every listed kernel except the E rows."""
    checker = CheckerKernel()
    half = HalfKernel()
    kernels: Dict[Pair, PairKernel] = {("A0", "A1"): FirstLevelKernel()}
    kernels.update({pair: checker for pair in CHECKER_PAIRS})
    kernels.update({("C", x): half for x in HALF_COLUMNS})
    kernels[("A1", "A3")] = ShiftedCheckerKernel()
    kernels[("C", "B1")] = InitialCoordinateKernel(recipe)
    kernels[("B1", "B1")] = ProjectionOrderKernel(recipe)
    kernels[("B1", "B2")] = CoordinateKernel(recipe)
    kernels[("B1", "B3")] = StairsKernel()
    kernels[("B1", "B4")] = ProductKernel(recipe)
    kernels[("B1", "B5")] = ProductKernel(recipe, complement=True)
    kernels[("D", "B1")] = InfiniteBoxKernel(recipe)
    kernels[("D", "B2")] = InfiniteCoordinateKernel(recipe)
    kernels[("D", "B4")] = InfiniteProductKernel(recipe)
    kernels[("D", "B5")] = InfiniteProductKernel(recipe, complement=True)
    kernels.update({("F", x): ConstantKernel(F_DENSITIES[x]) for x in F_COLUMNS})
    return kernels


def _is_e_pair(pair: Pair) -> bool:
    return pair[0] in ("E1", "E2") or pair[1] in ("E1", "E2")


def _mean_degree_fn(inner: PartitionedGraphon, part: str, columns: Iterable[str]):
    columns = tuple(columns)
    kernels = [inner.kernel(part, y) for y in columns]

    def degree_fn(t: np.ndarray) -> np.ndarray:
        return sum((k.row_degree(t) for k in kernels), np.zeros(t.shape)) / len(kernels)

    mean = sum((inner.block_density(part, y) for y in columns), Fraction(0)) / len(columns)
    return degree_fn, mean


class HypercubeGraphon(PartitionedGraphon):
    """
    The hypercubical graphon for a given recipe.

    Attributes:
        recipe (Recipe): The bijective recipe the B1 and D kernels are built on.
        depth (int): Truncation depth L of level enumerations (probes, quadrature, signatures).
        overrides (Dict[Pair, PairKernel]): Kernels replacing the defaults (negative controls).
    """

    def __init__(self, recipe: Optional[Recipe] = None, depth: int = 30,
                 overrides: Optional[Mapping[Pair, PairKernel]] = None):
        if depth < 1:
            raise ValueError("truncation depth must be at least 1")
        self.recipe = recipe or Recipe()
        self.depth = depth
        self.overrides: Dict[Pair, PairKernel] = dict(overrides or {})
        layout = hypercube_layout()
        inner_overrides = {p: k for p, k in self.overrides.items() if not _is_e_pair(p)}
        inner = PartitionedGraphon(layout, base_kernels(self.recipe)).with_kernels(inner_overrides)
        kernels = inner.kernels()
        for part in CORE_PARTS:
            degree_fn, mean = _mean_degree_fn(inner, part, INNER_PARTS)
            kernels[("E1", part)] = ComplementDegreeKernel("inner-complement", degree_fn, mean)
        degree_fn, mean = _mean_degree_fn(inner, "D", D_NEIGHBOURS)
        kernels[("E2", "D")] = ComplementDegreeKernel("d-complement", degree_fn, mean)
        e_overrides = {p: k for p, k in self.overrides.items() if _is_e_pair(p)}
        for (x, y), kernel in e_overrides.items():
            kernels.pop((y, x), None)
            kernels[(x, y)] = kernel
        name = "hypercubical" if not self.overrides else "hypercubical[mutated]"
        super().__init__(layout, kernels, name=name)
        logger.debug("Built %s with depth %d and %d listed pairs", name, depth, len(self.listed_pairs))

    def mutated(self, pair: Pair) -> "HypercubeGraphon":
        x, y = pair
        replacement = mutation_kernel(self.kernel(x, y))
        logger.info("Mutating kernel %sx%s to %s", x, y, replacement.name)
        overrides = {p: k for p, k in self.overrides.items() if p not in ((x, y), (y, x))}
        overrides[(x, y)] = replacement
        return HypercubeGraphon(self.recipe, self.depth, overrides)

    def eval_pair_kernel(self, x: str, y: str, s: float, t: float) -> float:
        """W^{XxY}(s, t) on scaled coordinates."""
        return self.kernel(x, y).eval(s, t)

    def level_membership(self, x: str, t) -> np.ndarray:
        """Level index of vertices of a leveled part (A1..A3, B1..B5)."""
        if x not in LEVELED_PARTS:
            raise ValueError(f"part {x} has no levels")
        return lattice_levels(_as_array(t))[0]

    @staticmethod
    def level_measure(k: int) -> Fraction:
        """Measure of the k-th level of a leveled part, 2^-k / 27."""
        return unit_level_measure(k, Fraction(1, 27))

    def expected_degree(self, x: str) -> Fraction:
        if x in PART_DEGREES:
            return PART_DEGREES[x]
        return {"E1": E1_DEGREE, "E2": E2_DEGREE}[x]

    def e1(self) -> Fraction:
        """Exact degree of the vertices of E1."""
        return self.part_degree("E1")

    def e2(self) -> Fraction:
        """Exact degree of the vertices of E2."""
        return self.part_degree("E2")

    def degree_profile(self, x: str, t: float) -> DegreeProfile:
        per_part = {y: float(self.relative_degree(x, t, y)[0]) for y in PART_NAMES}
        total = float(self.degree(x, _as_array(t))[0])
        return DegreeProfile(part=x, t=float(t), per_part=per_part, total=total)

    def d_coordinates(self, s, width: Optional[int] = None) -> np.ndarray:
        """(r_infinity(s))_1..width for scaled D coordinates."""
        return infinite_coordinates(self.recipe, s, width or self.depth)

    def estimate_e1_e2(self, samples: int, seed: int) -> Tuple[DensityEstimate, DensityEstimate]:
        """
        Monte Carlo estimates of the degrees of E1 and E2 vertices.

        Args:
            samples (int): Vertex pairs per estimate.
            seed (int): Root seed.

        Returns:
            Tuple[DensityEstimate, DensityEstimate]: Estimates of e1 and e2.
        """
        estimates = []
        for stream, part in enumerate(("E1", "E2")):
            rng = generator(seed, stream)
            s = lattice_uniform(rng, samples)
            y = lattice_uniform(rng, samples)
            pj, t = self.layout.locate(y)
            pi = np.full(samples, self.layout.index(part))
            estimates.append(DensityEstimate.from_samples(self.evaluate_parts(pi, s, pj, t)))
        e1, e2 = estimates
        if not (5 / 27 < e1.value <= 10 / 27 and 0 < e2.value <= 1 / 27):
            logger.warning("E degree estimates outside the expected bounds: e1=%.6f e2=%.6f", e1.value, e2.value)
        return e1, e2


def build(recipe: Optional[Recipe] = None, truncation: int = 30) -> HypercubeGraphon:
    """Assemble the hypercubical graphon."""
    return HypercubeGraphon(recipe=recipe, depth=truncation)
