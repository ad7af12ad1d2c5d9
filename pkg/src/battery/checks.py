"""
Forced-property checks of the hypercubical graphon.

Each check inspects one structural property that the defining constraints force and
returns one or more CheckReports. Exact checks compare analytic relative degrees at
sampled vertices (tolerance 1e-9); sampled checks are Monte Carlo estimates (default
tolerance 5e-3).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from src.constraints.evaluator import DEFAULT_TOLERANCE, EXACT_TOLERANCE, make_report
from src.density.engine import ratio_estimate
from src.density.streams import generator, lattice_uniform
from src.geometry.dyadic import snap
from src.graphon.hypercube import (
    CORE_PARTS,
    D_NEIGHBOURS,
    E1_DEGREE,
    E2_DEGREE,
    F_COLUMNS,
    F_DENSITIES,
    HALF_COLUMNS,
    INNER_PARTS,
    PART_NAMES,
    PART_DEGREES,
    HypercubeGraphon,
    level_coordinates,
)
from src.graphon.kernels import lattice_levels
from src.graphon.partitioned import Pair
from src.recipe.interleave import INFINITY
from src.state.models import CheckReport, DensityEstimate, Verdict

logger = logging.getLogger(__name__)

# Points sampled per block by the value checks.
BLOCK_POINTS = 10_000
# Points sampled per kernel by the 0/1 check.
ZERO_ONE_POINTS = 2_000
# Vertices sampled per part by the degree checks.
PROBES = 100
# Vertices sampled per level by level-wise checks.
LEVEL_PROBES = 16
# Deepest level visited by level-wise checks.
CHECK_DEPTH = 12
# Cap on Monte Carlo samples of a single sampled check.
MAX_SAMPLES = 1_000_000

Check = Callable[["BatteryContext"], List[CheckReport]]


@dataclass(frozen=True)
class BatteryContext:
    """Inputs shared by every check."""

    graphon: HypercubeGraphon
    budget: int
    seed: int
    tol: Optional[float] = None
    probes: int = PROBES

    @property
    def mc_tolerance(self) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOLERANCE

    @property
    def samples(self) -> int:
        return max(1000, min(int(self.budget), MAX_SAMPLES))

    def rng(self, *keys: int) -> np.random.Generator:
        return generator(self.seed, *keys)

    def points(self, *keys: int, size: Optional[int] = None) -> np.ndarray:
        return lattice_uniform(self.rng(*keys), size or self.probes)


def level_points(rng: np.random.Generator, k: int, size: int) -> np.ndarray:
    """Uniform scaled coordinates inside level k."""
    rho = rng.random(size)
    return snap(1.0 - 2.0 ** (1 - k) + rho * 2.0 ** -k)


def exact_report(name: str, deviation: float, details: Optional[dict] = None,
                 observed: Optional[float] = None, expected: float = 0.0) -> CheckReport:
    """Report of an exact check: observed value (by default the worst deviation) against its target."""
    lhs = DensityEstimate.exact(deviation if observed is None else observed)
    return make_report(name, lhs, DensityEstimate.exact(expected), EXACT_TOLERANCE, 0.0, details)


def _worst(values) -> float:
    values = np.asarray(values, dtype=np.float64)
    return float(np.max(np.abs(values))) if values.size else 0.0


def _levels(s: np.ndarray) -> np.ndarray:
    return lattice_levels(s)[0]


@lru_cache(maxsize=1)
def reference_structure() -> Tuple[FrozenSet[Pair], FrozenSet[Pair]]:
    """Listed pairs and 0/1-valued pairs of the unmodified graphon."""
    reference = HypercubeGraphon(depth=1)
    listed = frozenset(reference.listed_pairs)
    zero_one = frozenset(p for p in listed if reference.kernel(*p).zero_one)
    return listed, zero_one


def _unordered(pairs) -> List[Pair]:
    order = {name: i for i, name in enumerate(PART_NAMES)}
    return sorted({tuple(sorted(p, key=order.get)) for p in pairs}, key=lambda p: (order[p[0]], order[p[1]]))


# -- block values ------------------------------------------------------------------------


def check_zero_blocks(ctx: BatteryContext) -> List[CheckReport]:
    """Every pair of parts without a kernel is zero almost everywhere."""
    g = ctx.graphon
    listed, _ = reference_structure()
    size = min(BLOCK_POINTS, ctx.samples)
    reports = []
    all_pairs = [(x, y) for x in PART_NAMES for y in PART_NAMES]
    for index, (x, y) in enumerate(_unordered(p for p in all_pairs if p not in listed)):
        s = ctx.points(1, index, 0, size=size)
        t = ctx.points(1, index, 1, size=size)
        worst = _worst(g.evaluate_in(x, s, y, t))
        reports.append(exact_report(f"zero-blocks/{x}x{y}", worst, {"points": size}))
    return reports


def check_zero_one_blocks(ctx: BatteryContext) -> List[CheckReport]:
    """Kernels that are 0/1-valued take no other values."""
    g = ctx.graphon
    _, zero_one = reference_structure()
    offending: Dict[str, float] = {}
    worst = 0.0
    pairs = _unordered(zero_one)
    for index, (x, y) in enumerate(pairs):
        s = ctx.points(2, index, 0, size=ZERO_ONE_POINTS)
        t = ctx.points(2, index, 1, size=ZERO_ONE_POINTS)
        values = g.evaluate_in(x, s, y, t)
        distance = _worst(np.minimum(np.abs(values), np.abs(1.0 - values)))
        if distance > 0:
            offending[f"{x}x{y}"] = distance
        worst = max(worst, distance)
    return [exact_report("zero-one-blocks", worst, {"kernels": len(pairs), "offending": offending})]


def check_f_densities(ctx: BatteryContext) -> List[CheckReport]:
    """F is joined to the core parts by constant densities 1/10 .. 9/10."""
    g = ctx.graphon
    deviations = {}
    for index, y in enumerate(F_COLUMNS):
        s = ctx.points(3, index, 0)
        t = ctx.points(3, index, 1)
        target = float(F_DENSITIES[y])
        values = g.evaluate_in("F", s, y, t) - target
        degrees = g.relative_degree("F", s, y) - target
        deviations[y] = max(_worst(values), _worst(degrees))
    return [exact_report("f-pseudorandom", max(deviations.values()), {"per_part": deviations})]


# -- degrees -----------------------------------------------------------------------------


def check_part_degrees(ctx: BatteryContext) -> List[CheckReport]:
    """Degrees are constant on A0..C, D and F and equal the tabulated values; e1 and e2 match their closed forms."""
    g = ctx.graphon
    deviations = {}
    for index, x in enumerate(CORE_PARTS + ("D", "F")):
        s = ctx.points(4, index)
        deviations[x] = _worst(g.degree(x, s) - float(PART_DEGREES[x]))
    for index, (x, exact) in enumerate((("E1", E1_DEGREE), ("E2", E2_DEGREE))):
        s = ctx.points(4, 100 + index)
        deviations[x] = max(abs(float(g.part_degree(x) - exact)), _worst(g.degree(x, s) - float(exact)))
    return [exact_report("part-degrees", max(deviations.values()), {"per_part": deviations})]


def check_degree_distinctness(ctx: BatteryContext) -> List[CheckReport]:
    """The fourteen part degrees are pairwise distinct."""
    degrees = {x: ctx.graphon.part_degree(x) for x in PART_NAMES}
    ordered = sorted(degrees.values())
    gaps = [b - a for a, b in zip(ordered, ordered[1:])]
    collisions = sum(1 for gap in gaps if gap == 0)
    details = {"degrees": {x: float(d) for x, d in degrees.items()}, "min_gap": float(min(gaps))}
    return [exact_report("degree-distinctness", float(collisions), details)]


def check_degree_unification(ctx: BatteryContext) -> List[CheckReport]:
    """Every vertex of A0..C has relative degree 1/2 outside E2 and F."""
    g = ctx.graphon
    outside = [y for y in PART_NAMES if y not in ("E2", "F")]
    deviations = {}
    for index, x in enumerate(CORE_PARTS):
        s = ctx.points(5, index)
        deviations[x] = _worst(g.union_degree(x, s, outside) - 0.5)
    return [exact_report("degree-unification", max(deviations.values()), {"per_part": deviations})]


def check_e_rows(ctx: BatteryContext) -> List[CheckReport]:
    """W(x, z) = 1 - deg_I x for z in E1, and W(d, z) = 1 - mean deg over B1, B2, B4, B5 for z in E2."""
    g = ctx.graphon
    deviations = {}
    for index, x in enumerate(CORE_PARTS):
        s = ctx.points(6, index, 0)
        z = ctx.points(6, index, 1)
        deviations[f"E1x{x}"] = _worst(g.evaluate_in("E1", z, x, s) - (1.0 - g.union_degree(x, s, INNER_PARTS)))
    s = ctx.points(6, 99, 0)
    z = ctx.points(6, 99, 1)
    mean = sum(g.relative_degree("D", s, y) for y in D_NEIGHBOURS) / len(D_NEIGHBOURS)
    deviations["E2xD"] = _worst(g.evaluate_in("E2", z, "D", s) - (1.0 - mean))
    return [exact_report("e-row-cauchy-schwarz", max(deviations.values()), {"per_pair": deviations})]


def check_e_bounds(ctx: BatteryContext) -> List[CheckReport]:
    """Sampled e1 and e2 agree with the exact values, which lie in (5/27, 10/27] and (0, 1/27]."""
    g = ctx.graphon
    e1_hat, e2_hat = g.estimate_e1_e2(ctx.samples, ctx.seed)
    bounds = {"e1": (Fraction(5, 27), Fraction(10, 27), g.e1()), "e2": (Fraction(0), Fraction(1, 27), g.e2())}
    reports = []
    for name, estimate in (("e1", e1_hat), ("e2", e2_hat)):
        low, high, exact = bounds[name]
        inside = low < exact <= high
        report = make_report(f"e-bounds/{name}", estimate, DensityEstimate.exact(float(exact)), ctx.mc_tolerance,
                             details={"exact": str(exact), "bounds": [float(low), float(high)], "in_bounds": inside})
        if not inside:
            report = report.model_copy(update={"verdict": Verdict.FAIL})
        reports.append(report)
    return reports


# -- diagonal checkers and levels --------------------------------------------------------


def check_triangular_rows(ctx: BatteryContext) -> List[CheckReport]:
    """A vertex of C has the same relative degree in every half-graphon column as in C, namely its position."""
    g = ctx.graphon
    s = ctx.points(7)
    own = g.relative_degree("C", s, "C")
    deviations = {"C": _worst(own - s)}
    for y in HALF_COLUMNS + ("B1",):
        deviations[y] = _worst(g.relative_degree("C", s, y) - own)
    return [exact_report("triangular-rows", max(deviations.values()), {"per_part": deviations})]


def check_checker_cliques(ctx: BatteryContext) -> List[CheckReport]:
    """A1xA1 is a disjoint union of cliques, the k-th of measure 2^-k, with edge density 1/3."""
    g = ctx.graphon
    size = min(BLOCK_POINTS, ctx.samples)
    s = ctx.points(8, 0, size=size)
    t = ctx.points(8, 1, size=size)
    same = (_levels(s) == _levels(t)).astype(np.float64)
    deviations = {"cliques": _worst(g.evaluate_in("A1", s, "A1", t) - same)}
    rng = ctx.rng(8, 2)
    measures = []
    for k in range(1, CHECK_DEPTH + 1):
        u = level_points(rng, k, LEVEL_PROBES)
        measures.append(_worst(g.relative_degree("A1", u, "A1") - 2.0 ** -k))
    deviations["measures"] = max(measures)
    deviations["density"] = abs(float(g.block_density("A1", "A1") - Fraction(1, 3)))
    return [exact_report("checker-cliques", max(deviations.values()), deviations)]


def check_bipartition_alignment(ctx: BatteryContext) -> List[CheckReport]:
    """Vertices of A1 have the same relative degree in A1 as in A2, B1..B5; levels of A3 and B2 follow A2."""
    g = ctx.graphon
    s = ctx.points(9, 0)
    own = g.relative_degree("A1", s, "A1")
    deviations = {}
    for y in ("A2", "B1", "B2", "B3", "B4", "B5"):
        deviations[f"A1:{y}"] = _worst(g.relative_degree("A1", s, y) - own)
    for index, (x, y) in enumerate((("A3", "A2"), ("B2", "A2"), ("A2", "A1"), ("B1", "A1"), ("B2", "A1"),
                                    ("B3", "A1"), ("B4", "A1"), ("B5", "A1"))):
        t = ctx.points(9, 1 + index)
        deviations[f"{x}:{y}"] = _worst(g.relative_degree(x, t, y) - np.ldexp(1.0, -_levels(t)))
    return [exact_report("bipartition-alignment", max(deviations.values()), {"per_pair": deviations})]


def check_shift(ctx: BatteryContext) -> List[CheckReport]:
    """A vertex of A1 has relative degree 1/2 in A1 (and 0 in A3) or twice its A1 degree in A3."""
    g = ctx.graphon
    s = ctx.points(10)
    d1 = g.relative_degree("A1", s, "A1")
    d3 = g.relative_degree("A1", s, "A3")
    either = np.minimum(np.abs(d1 - 0.5), np.abs(d3 - 2.0 * d1))
    first = np.where(d1 == 0.5, np.abs(d3), 0.0)
    return [exact_report("shift-a1-a3", max(_worst(either), _worst(first)))]


def check_first_level(ctx: BatteryContext) -> List[CheckReport]:
    """deg_A0 x = 0 or deg_A1 x = 1/2 on A1, first-level vertices see all of A0, and A0xA1 has density 1/2."""
    g = ctx.graphon
    s = ctx.points(11)
    d0 = g.relative_degree("A1", s, "A0")
    d1 = g.relative_degree("A1", s, "A1")
    deviations = {
        "either": _worst(np.minimum(np.abs(d0), np.abs(d1 - 0.5))),
        "first-level": _worst(np.where(d1 == 0.5, d0 - 1.0, 0.0)),
        "density": abs(float(g.block_density("A0", "A1") - Fraction(1, 2))),
    }
    return [exact_report("first-level", max(deviations.values()), deviations)]


def check_level_expressions(ctx: BatteryContext) -> List[CheckReport]:
    """
    Level statistics of random vertices of B1 and B2, with levels read off their A1 degrees.

    Same level: 1/3; consecutive levels: 1/6; B1 vertex on the first level: 1/2; edge
    between same-level vertices: 1/2.
    """
    g = ctx.graphon
    n = ctx.samples
    s = ctx.points(12, 0, size=n)
    t = ctx.points(12, 1, size=n)
    d1 = g.relative_degree("B1", s, "A1")
    d2 = g.relative_degree("B2", t, "A1")
    same = (d1 == d2).astype(np.float64)
    consecutive = (d1 == 2.0 * d2).astype(np.float64)
    first = (d1 == 0.5).astype(np.float64)
    edges = g.evaluate_in("B1", s, "B2", t)
    estimates = {
        "same-level": (DensityEstimate.from_samples(same), Fraction(1, 3)),
        "consecutive-levels": (DensityEstimate.from_samples(consecutive), Fraction(1, 6)),
        "first-level-b1": (DensityEstimate.from_samples(first), Fraction(1, 2)),
        "same-level-edges": (ratio_estimate(edges * same, same), Fraction(1, 2)),
    }
    return [make_report(f"level-expressions/{name}", estimate, DensityEstimate.exact(float(target)),
                        ctx.mc_tolerance, details={"target": str(target)})
            for name, (estimate, target) in estimates.items()]


# -- recipe structure --------------------------------------------------------------------


def check_stairs(ctx: BatteryContext) -> List[CheckReport]:
    """A vertex of B1 on level k0 has relative degree 1 in B3 levels m <= k0 and 0 above."""
    g = ctx.graphon
    rng = ctx.rng(13)
    worst = 0.0
    for k0 in range(1, CHECK_DEPTH + 1):
        s = level_points(rng, k0, LEVEL_PROBES)
        worst = max(worst, _worst(g.relative_degree("B1", s, "B3") - (1.0 - 2.0 ** -k0)))
        for m in range(1, k0 + 4):
            target = 1.0 if m <= k0 else 0.0
            worst = max(worst, _worst(g.relative_level_degree("B1", s, "B3", m) - target))
    return [exact_report("stairs", worst, {"depth": CHECK_DEPTH})]


def check_coordinate_structure(ctx: BatteryContext) -> List[CheckReport]:
    """
    B1 and D against B2, B4, B5: no neighbours on levels above the level of a B1 vertex,
    and neighbourhoods inside a level are initial segments (N(b') within N(b) for b before b').
    """
    g = ctx.graphon
    rng = ctx.rng(14)
    deviations = {}
    for y in ("B1", "D"):
        for x in ("B2", "B4", "B5"):
            worst = 0.0
            if y == "B1":
                for k0 in range(1, 7):
                    s = level_points(rng, k0, LEVEL_PROBES)
                    for m in range(k0 + 1, k0 + 4):
                        worst = max(worst, _worst(g.relative_level_degree("B1", s, x, m)))
            anchors = lattice_uniform(rng, 50)
            for m in range(1, 5):
                pair = np.sort(level_points(rng, m, 2 * 50).reshape(50, 2), axis=1)
                before = g.evaluate_in(y, anchors, x, pair[:, 0])
                after = g.evaluate_in(y, anchors, x, pair[:, 1])
                worst = max(worst, _worst(np.maximum(after - before, 0.0)))
            deviations[f"{y}x{x}"] = worst
    return [exact_report("coordinate-structure", max(deviations.values()), {"per_pair": deviations})]


def check_initial_coordinate(ctx: BatteryContext) -> List[CheckReport]:
    """deg_{B2,1} b = (deg_C b - (1 - 2 deg_A1 b)) / deg_A1 b for b in B1."""
    g = ctx.graphon
    rng = ctx.rng(15)
    s = np.concatenate([ctx.points(15, 1)] + [level_points(rng, k, LEVEL_PROBES) for k in range(1, CHECK_DEPTH + 1)])
    d_a1 = g.relative_degree("B1", s, "A1")
    d_c = g.relative_degree("B1", s, "C")
    lhs = g.relative_level_degree("B1", s, "B2", 1)
    rhs = (d_c - (1.0 - 2.0 * d_a1)) / d_a1
    return [exact_report("initial-coordinate", _worst(lhs - rhs), {"vertices": int(s.size)})]


def check_distribution_linearity(ctx: BatteryContext) -> List[CheckReport]:
    """
    For b in level k0 of B2 and k >= k0, deg_{B1,k} b = 1 - 2^k0 (deg_C b - (1 - 2^-(k0-1))),
    linear in the position of b; its degree in D follows the same line.
    """
    g = ctx.graphon
    rng = ctx.rng(16)
    deviations = {"B1": 0.0, "D": 0.0}
    for k0 in range(1, 9):
        t = level_points(rng, k0, LEVEL_PROBES)
        line = 1.0 - 2.0 ** k0 * (g.relative_degree("B2", t, "C") - (1.0 - 2.0 ** -(k0 - 1)))
        for k in range(k0, k0 + 4):
            deviations["B1"] = max(deviations["B1"], _worst(g.relative_level_degree("B2", t, "B1", k) - line))
        deviations["D"] = max(deviations["D"], _worst(g.relative_degree("B2", t, "D") - line))
    return [exact_report("distribution-linearity", max(deviations.values()), deviations)]


def check_products(ctx: BatteryContext) -> List[CheckReport]:
    """deg_{B4,i} b = prod_{j<=i} deg_{B2,j} b and deg_{B5,i} b = prod (1 - deg_{B2,j} b), per level of b."""
    g = ctx.graphon
    rng = ctx.rng(17)
    reports = []
    for k in range(1, 6):
        s = level_points(rng, k, ctx.probes)
        coords = np.stack([g.relative_level_degree("B1", s, "B2", j) for j in range(1, k + 1)], axis=1)
        worst = 0.0
        for i in range(1, k + 1):
            worst = max(worst, _worst(g.relative_level_degree("B1", s, "B4", i) - np.prod(coords[:, :i], axis=1)))
            worst = max(worst, _worst(g.relative_level_degree("B1", s, "B5", i)
                                      - np.prod(1.0 - coords[:, :i], axis=1)))
        reports.append(exact_report(f"products/level-{k}", worst, {"vertices": int(s.size)}))
    return reports


def check_infinite_constraints(ctx: BatteryContext) -> List[CheckReport]:
    """For d in D: deg_{B1,k} d = deg_{B4,k} d = prod_{i<=k} deg_{B2,i} d, and B5 carries the co-products."""
    g = ctx.graphon
    s = ctx.points(18)
    coords = np.stack([g.relative_level_degree("D", s, "B2", i) for i in range(1, CHECK_DEPTH + 1)], axis=1)
    worst = 0.0
    for k in range(1, CHECK_DEPTH + 1):
        b4 = g.relative_level_degree("D", s, "B4", k)
        worst = max(worst, _worst(g.relative_level_degree("D", s, "B1", k) - b4))
        worst = max(worst, _worst(b4 - np.prod(coords[:, :k], axis=1)))
        worst = max(worst, _worst(g.relative_level_degree("D", s, "B5", k) - np.prod(1.0 - coords[:, :k], axis=1)))
    return [exact_report("infinite-constraints", worst, {"depth": CHECK_DEPTH})]


def _comparable(ks: int, cs: Tuple[float, ...], kt: int, ct: Tuple[float, ...]) -> bool:
    common = min(ks, kt)
    below = all(a <= b for a, b in zip(cs[:common], ct[:common]))
    above = all(a >= b for a, b in zip(cs[:common], ct[:common]))
    if ks < kt:
        return below
    if ks > kt:
        return above
    return below or above


def check_projection_order(ctx: BatteryContext) -> List[CheckReport]:
    """B1xB1 is 0/1 and equals 1 exactly on pairs whose recipe coordinates are comparable."""
    g = ctx.graphon
    recipe = g.recipe
    size = min(2000, ctx.samples)
    s = ctx.points(19, 0, size=size)
    t = ctx.points(19, 1, size=size)
    values = g.evaluate_in("B1", s, "B1", t)
    ks, rs = lattice_levels(s)
    kt, rt = lattice_levels(t)
    rs, rt = snap(rs), snap(rt)
    mismatches = 0
    for i in range(size):
        cs = recipe.apply(int(ks[i]), float(rs[i])).coords
        ct = recipe.apply(int(kt[i]), float(rt[i])).coords
        expected = 1.0 if _comparable(int(ks[i]), cs, int(kt[i]), ct) else 0.0
        if values[i] != expected:
            mismatches += 1
    return [exact_report("projection-order", float(mismatches), {"pairs": size})]


def check_recipe_property(ctx: BatteryContext) -> List[CheckReport]:
    """
    Within level k of B1, the vertices dominated by b have measure prod (r_k(b))_i; comparable
    vertices (dominated or dominating) make up the level degree of b in B1.
    """
    g = ctx.graphon
    recipe = g.recipe
    rng = ctx.rng(20)
    worst = 0.0
    for k in range(1, 7):
        s = level_points(rng, k, LEVEL_PROBES)
        _, _, coords = level_coordinates(recipe, s, k)
        degree = g.relative_level_degree("B1", s, "B1", k)
        for row in range(s.size):
            c = [Fraction(float(v)) for v in coords[row]]
            below = recipe.count_below(k, c)
            above = recipe.count_below(k, [1 - v for v in c])
            worst = max(worst, abs(float(below) - float(np.prod(coords[row]))))
            worst = max(worst, abs(float(degree[row]) - float(below + above)))
    reports = [exact_report("recipe-property/exact", worst, {"levels": 6})]
    b = level_points(rng, 3, 1)
    thresholds = [float(v) for v in level_coordinates(recipe, b, 3)[2][0]]
    estimate = recipe.verify_recipe_property(3, 3, thresholds, ctx.samples, ctx.seed)
    target = float(recipe.count_below(3, thresholds))
    reports.append(make_report("recipe-property/sampled", estimate, DensityEstimate.exact(target), ctx.mc_tolerance,
                               details={"thresholds": thresholds}))
    return reports


def check_d_measure_preservation(ctx: BatteryContext) -> List[CheckReport]:
    """The fraction of d in D with deg_{B2,i} d below deg_{B2,i} b for i <= k is the lattice product for b in B1."""
    g = ctx.graphon
    rng = ctx.rng(21)
    n = ctx.samples
    d = lattice_uniform(rng, n)
    reports = []
    for k in (1, 2, 3):
        b = level_points(rng, k, 1)
        thresholds = np.asarray([g.relative_level_degree("B1", b, "B2", j)[0] for j in range(1, k + 1)])
        d_coords = np.stack([g.relative_level_degree("D", d, "B2", j) for j in range(1, k + 1)], axis=1)
        hits = np.all(d_coords < thresholds, axis=1).astype(np.float64)
        target = float(g.recipe.count_below(INFINITY, [float(v) for v in thresholds]))
        reports.append(make_report(f"d-measure-preservation/level-{k}", DensityEstimate.from_samples(hits),
                                   DensityEstimate.exact(target), ctx.mc_tolerance,
                                   details={"thresholds": thresholds.tolist(), "product": float(np.prod(thresholds))}))
    return reports


CHECKS: Dict[str, Check] = {
    "zero-blocks": check_zero_blocks,
    "zero-one-blocks": check_zero_one_blocks,
    "f-pseudorandom": check_f_densities,
    "part-degrees": check_part_degrees,
    "degree-distinctness": check_degree_distinctness,
    "degree-unification": check_degree_unification,
    "e-row-cauchy-schwarz": check_e_rows,
    "e-bounds": check_e_bounds,
    "triangular-rows": check_triangular_rows,
    "checker-cliques": check_checker_cliques,
    "bipartition-alignment": check_bipartition_alignment,
    "shift-a1-a3": check_shift,
    "first-level": check_first_level,
    "level-expressions": check_level_expressions,
    "stairs": check_stairs,
    "coordinate-structure": check_coordinate_structure,
    "initial-coordinate": check_initial_coordinate,
    "distribution-linearity": check_distribution_linearity,
    "products": check_products,
    "infinite-constraints": check_infinite_constraints,
    "projection-order": check_projection_order,
    "recipe-property": check_recipe_property,
    "d-measure-preservation": check_d_measure_preservation,
}
