"""
Neighbourhood functions, their L1 and similarity distances, and the coordinate map on D.

The vertex x is represented by f_x(y) = W(x, y). For the hypercubical graphon the
neighbourhood of a D vertex is determined by its recipe coordinates, which the
signature map H(f_x) = (deg_{B2,i} x)_i reads off; the sandwich check compares both
distances with weighted sums of coordinate differences.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from src.density.engine import DEFAULT_BUDGET
from src.density.streams import derive_seed, generator, lattice_uniform, worker_count
from src.exceptions import LayoutMismatch
from src.geometry.dyadic import snap
from src.graphon.core import Graphon
from src.graphon.hypercube import D_NEIGHBOURS, LEVELED_PARTS, PART_MEASURES, HypercubeGraphon
from src.graphon.partitioned import PartitionedGraphon
from src.state.models import DensityEstimate, EstimatorKind, SandwichRow

logger = logging.getLogger(__name__)

# Levels resolved by the strata of numerical integrals; deeper levels form one tail cell.
STRATUM_DEPTH = 10
# Points per stratum of the deterministic L1 quadrature.
QUADRATURE_POINTS = 64
# Inner points per stratum of the similarity distance.
INNER_POINTS = 8
# Points per stratum of the neighbourhood vectors used by the class counter.
CLASS_POINTS = 8
# Absolute slack of the sandwich inequalities on top of the truncation tail.
SANDWICH_SLACK = 1e-6
# Pairs of cells evaluated per kernel call.
EVAL_CHUNK = 1 << 18


def _level_cuts(depth: int) -> np.ndarray:
    """0, 1/2, 3/4, ..., 1 - 2^-depth, 1."""
    return np.concatenate([1.0 - np.ldexp(1.0, -np.arange(0, depth + 1)), [1.0]])


def strata(graphon: Graphon, depth: int = STRATUM_DEPTH) -> Tuple[np.ndarray, np.ndarray]:
    """
    Global [start, end) cells for level-wise integration.

    Leveled parts of the hypercubical graphon (and [0, 1] itself for unpartitioned
    graphons) are split into their first `depth` levels plus a tail cell; other parts
    are single cells.
    """
    cuts = _level_cuts(depth)
    layout = graphon.layout
    if layout is None:
        return cuts[:-1], cuts[1:]
    leveled = LEVELED_PARTS if isinstance(graphon, HypercubeGraphon) else ()
    starts, ends = [], []
    for i, name in enumerate(layout.names):
        local = cuts if name in leveled else np.array([0.0, 1.0])
        cells = layout.starts[i] + local * layout.measures[i]
        starts.append(cells[:-1])
        ends.append(cells[1:])
    return np.concatenate(starts), np.concatenate(ends)


def stratified_points(starts: np.ndarray, ends: np.ndarray, per_stratum: int,
                      rng: Optional[np.random.Generator] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Systematic points (j + u) / m inside every cell, u = 1/2 without a generator.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Points (cell-major) and their quadrature weights.
    """
    count = starts.size
    shift = np.full((count, 1), 0.5) if rng is None else rng.random((count, 1))
    offsets = (np.arange(per_stratum)[None, :] + shift) / per_stratum
    points = starts[:, None] + offsets * (ends - starts)[:, None]
    weights = np.repeat((ends - starts) / per_stratum, per_stratum)
    return snap(np.clip(points.ravel(), 0.0, np.nextafter(1.0, 0.0))), weights


class VertexFunction:
    """
    The neighbourhood function f_x(y) = W(x, y) of an anchor x.

    Attributes:
        graphon (Graphon): The graphon the anchor lives in.
        x (float): Global anchor coordinate on the lattice.
        depth (int): Levels kept by the level-wise degree summary.
    """

    def __init__(self, graphon: Graphon, x: float, depth: Optional[int] = None):
        if not 0.0 <= x < 1.0:
            raise ValueError(f"anchor {x} outside [0, 1)")
        self.graphon = graphon
        self.x = float(snap(np.asarray([x], dtype=np.float64))[0])
        self.depth = depth or getattr(graphon, "depth", STRATUM_DEPTH)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        return self.graphon.evaluate(np.full(y.shape, self.x), y)

    def __repr__(self) -> str:
        return f"VertexFunction(x={self.x!r}, graphon={self.graphon.name!r})"

    @cached_property
    def location(self) -> Tuple[Optional[str], float]:
        """Part name and scaled coordinate of the anchor (no part for unpartitioned graphons)."""
        layout = self.graphon.layout
        if layout is None:
            return None, self.x
        index, s = layout.locate(np.asarray([self.x]))
        return layout.names[int(index[0])], float(s[0])

    @cached_property
    def level_summary(self) -> Dict[str, np.ndarray]:
        """Relative degrees of the anchor per part, split into levels 1..depth for leveled parts."""
        g = self.graphon
        if not isinstance(g, PartitionedGraphon):
            return {}
        part, s = self.location
        leveled = LEVELED_PARTS if isinstance(g, HypercubeGraphon) else ()
        summary = {}
        for y in g.layout.names:
            if y in leveled:
                summary[y] = np.array([g.relative_level_degree(part, s, y, m)[0] for m in range(1, self.depth + 1)])
            else:
                summary[y] = g.relative_degree(part, s, y)
        return summary


class CoordSignature(BaseModel):
    """The vector (deg_{B2,i} x)_i of a D vertex (or of a B1 vertex, one entry per coordinate of its level)."""

    model_config = ConfigDict(frozen=True)

    part: str = Field(..., description="Part of the anchor, D or B1")
    anchor: float = Field(..., description="Global coordinate of the anchor")
    values: Tuple[float, ...] = Field(..., description="Relative degrees in the levels of B2")

    def deltas(self, other: "CoordSignature") -> np.ndarray:
        """Coordinate differences, the shorter signature padded with zeros."""
        width = max(len(self.values), len(other.values))
        a = np.zeros(width)
        b = np.zeros(width)
        a[:len(self.values)] = self.values
        b[:len(other.values)] = other.values
        return a - b

    def to_dict(self) -> Dict[str, object]:
        return self.model_dump()


def _same_graphon(fx: VertexFunction, fy: VertexFunction) -> Graphon:
    if fx.graphon is not fy.graphon:
        raise LayoutMismatch("vertex functions are anchored in different graphons")
    return fx.graphon


def _both_in_d(fx: VertexFunction, fy: VertexFunction) -> bool:
    return isinstance(fx.graphon, HypercubeGraphon) and fx.location[0] == "D" and fy.location[0] == "D"


def coord_signature(g: HypercubeGraphon, x: float, depth: Optional[int] = None) -> CoordSignature:
    """
    Signature of a vertex of D (depth entries) or of B1 (level many entries).

    Entries are read off the B2 kernels, so for D they equal the prefix of r_infinity(x).

    Raises:
        LayoutMismatch: If x lies in another part.
    """
    part, s = VertexFunction(g, x).location
    if part == "D":
        width = depth or g.depth
    elif part == "B1":
        width = int(g.level_membership("B1", s)[0])
        if depth is not None:
            width = min(width, depth)
    else:
        raise LayoutMismatch(f"signatures are defined on D and B1, not on {part}")
    values = tuple(float(g.relative_level_degree(part, s, "B2", i)[0]) for i in range(1, width + 1))
    return CoordSignature(part=part, anchor=float(x), values=values)


def l1_tail_bound(depth: int) -> float:
    """Largest possible contribution of levels beyond depth to the L1 distance of two D vertices."""
    return 8.0 * 2.0 ** -depth / 27.0


def _d_pair_l1(g: HypercubeGraphon, s: float, s2: float, depth: int) -> float:
    """
    ||f_x - f_x'||_1 for two D vertices, level by level.

    Level i of B2 contributes |d_i - d'_i|; B4 and B5 the differences of the prefix
    (co-)products; level i of B1 the symmetric difference of the two recipe boxes.
    E2 sees each vertex through 1 - (deg_B1 + deg_B2 + deg_B4 + deg_B5) / 4.
    """
    d = g.d_coordinates(np.asarray([s]), depth)[0]
    e = g.d_coordinates(np.asarray([s2]), depth)[0]
    level_weights = np.ldexp(1.0, -np.arange(1, depth + 1))
    pd_, pe = np.cumprod(d), np.cumprod(e)
    qd, qe = np.cumprod(1.0 - d), np.cumprod(1.0 - e)
    box = pd_ + pe - 2.0 * np.cumprod(np.minimum(d, e))
    levels = level_weights @ (box + np.abs(d - e) + np.abs(pd_ - pe) + np.abs(qd - qe))
    degrees_d = level_weights @ (2.0 * pd_ + d + qd)
    degrees_e = level_weights @ (2.0 * pe + e + qe)
    e2 = float(PART_MEASURES["E2"]) * abs(degrees_d - degrees_e) / len(D_NEIGHBOURS)
    return float(levels) / 27.0 + e2


def l1_distance(fx: VertexFunction, fy: VertexFunction, depth: Optional[int] = None) -> float:
    """
    ||f_x - f_x'||_1.

    Two D vertices of the hypercubical graphon are integrated analytically level by
    level (error at most l1_tail_bound(depth)); everything else by midpoint quadrature
    on the level strata.
    """
    g = _same_graphon(fx, fy)
    if fx.x == fy.x:
        return 0.0
    if _both_in_d(fx, fy):
        return _d_pair_l1(g, fx.location[1], fy.location[1], depth or g.depth)
    starts, ends = strata(g, min(depth or STRATUM_DEPTH, STRATUM_DEPTH))
    y, w = stratified_points(starts, ends, QUADRATURE_POINTS)
    return float(w @ np.abs(fx(y) - fy(y)))


def _inner_integrals(g: Graphon, z: np.ndarray, y: np.ndarray, coeff: np.ndarray) -> np.ndarray:
    rows = max(1, EVAL_CHUNK // max(1, y.size))
    out = []
    for lo in range(0, z.size, rows):
        chunk = z[lo:lo + rows]
        values = g.evaluate(np.repeat(chunk, y.size), np.tile(y, chunk.size)).reshape(chunk.size, y.size)
        out.append(values @ coeff)
    return np.concatenate(out) if out else np.zeros(0)


def similarity_distance(fx: VertexFunction, fy: VertexFunction, budget: int = DEFAULT_BUDGET, seed: int = 0,
                        depth: int = STRATUM_DEPTH) -> DensityEstimate:
    """
    d_W(f_x, f_x') = int |int W(z, y) (f_x(y) - f_x'(y)) dy| dz.

    Both integrals are stratified over the level cells; the inner points are shared by
    every outer point and restricted to where f_x and f_x' differ.

    Args:
        fx (VertexFunction): First neighbourhood function.
        fy (VertexFunction): Second neighbourhood function.
        budget (int): Kernel evaluations to spend.
        seed (int): Root seed.
        depth (int): Levels resolved by the strata.

    Returns:
        DensityEstimate: Estimate with the stratified standard error.
    """
    g = _same_graphon(fx, fy)
    starts, ends = strata(g, depth)
    y, wy = stratified_points(starts, ends, INNER_POINTS, generator(seed, 0))
    diff = fx(y) - fy(y)
    support = diff != 0
    if not support.any():
        return DensityEstimate.exact(0.0)
    y, coeff = y[support], (wy * diff)[support]
    per_stratum = max(2, budget // max(1, y.size * starts.size))
    z, wz = stratified_points(starts, ends, per_stratum, generator(seed, 1))
    values = np.abs(_inner_integrals(g, z, y, coeff))
    cell_measure = ends - starts
    variance = values.reshape(starts.size, per_stratum).var(axis=1, ddof=1)
    stderr = float(np.sqrt(np.sum(cell_measure ** 2 * variance) / per_stratum))
    logger.debug("d_W(%s, %s) over %d x %d points", fx.x, fy.x, z.size, y.size)
    return DensityEstimate(value=float(wz @ values), stderr=stderr, samples=int(z.size),
                           kind=EstimatorKind.MONTE_CARLO)


def sandwich_bounds(deltas: Sequence[float]) -> Dict[str, float]:
    """The four coordinate sums bracketing the L1 and similarity distances of two D vertices."""
    deltas = np.abs(np.asarray(deltas, dtype=np.float64))
    i = np.arange(1, deltas.size + 1)
    halves = float(np.ldexp(1.0, -i) @ deltas)
    quarters = float(np.ldexp(1.0, -2 * i) @ deltas)
    return {
        "lower": halves / 27.0,
        "upper": 14.0 * halves / 27.0,
        "dw_lower": quarters / 729.0,
        "dw_printed_lower": quarters / 27.0,
    }


def sandwich_check(g: HypercubeGraphon, x: float, x_prime: float, depth: Optional[int] = None,
                   budget: int = DEFAULT_BUDGET, seed: int = 0, pair_id: int = 0) -> SandwichRow:
    """
    Check sum lambda(B2_i)|delta_i| <= L1 <= (14/27) sum 2^-i |delta_i| and
    (1/729) sum 4^-i |delta_i| <= d_W <= L1 for two D vertices.

    The L1 comparisons allow the truncation tail plus 1e-6; the d_W comparisons also
    allow four standard errors of the d_W estimate.
    """
    depth = depth or g.depth
    sig = coord_signature(g, x, depth)
    sig_prime = coord_signature(g, x_prime, depth)
    if sig.part != "D" or sig_prime.part != "D":
        raise LayoutMismatch("the sandwich compares vertices of D")
    fx, fy = VertexFunction(g, x, depth), VertexFunction(g, x_prime, depth)
    bounds = sandwich_bounds(sig.deltas(sig_prime))
    l1 = l1_distance(fx, fy, depth)
    dw = similarity_distance(fx, fy, budget, seed)
    margin = SANDWICH_SLACK + l1_tail_bound(depth)
    noise = 4.0 * dw.stderr
    holds = (bounds["lower"] <= l1 + margin and l1 <= bounds["upper"] + margin
             and bounds["dw_lower"] <= dw.value + noise + margin and dw.value <= l1 + noise + margin)
    if not holds:
        logger.warning("Sandwich violated for pair %d (%s, %s): %s l1=%.3g dw=%.3g", pair_id, x, x_prime,
                       bounds, l1, dw.value)
    return SandwichRow(pair_id=pair_id, x=float(x), x_prime=float(x_prime), l1=l1, dw=dw.value,
                       dw_stderr=dw.stderr, holds=holds, **bounds)


def random_d_vertices(g: HypercubeGraphon, count: int, seed: int) -> np.ndarray:
    """Global coordinates of uniformly random vertices of D."""
    s = lattice_uniform(generator(seed, 0), count)
    return g.layout.to_global(np.full(count, g.layout.index("D")), s)


def sandwich_table(g: HypercubeGraphon, pairs: int, budget: int = DEFAULT_BUDGET, seed: int = 0,
                   depth: Optional[int] = None, threads: Optional[int] = None, quiet: bool = True
                   ) -> List[SandwichRow]:
    """
    Sandwich rows for random pairs of D vertices, checked concurrently.

    Args:
        g (HypercubeGraphon): The graphon.
        pairs (int): Number of pairs.
        budget (int): Kernel evaluations per similarity distance.
        seed (int): Root seed.
        depth (Optional[int]): Truncation depth.
        threads (Optional[int]): Worker cap.
        quiet (bool): Hide the progress bar.

    Returns:
        List[SandwichRow]: One row per pair, in pair order.
    """
    anchors = random_d_vertices(g, 2 * pairs, seed).reshape(pairs, 2)

    def run(pair_id: int) -> SandwichRow:
        x, x_prime = anchors[pair_id]
        return sandwich_check(g, x, x_prime, depth, budget, derive_seed(seed, 1, pair_id), pair_id)

    with ThreadPoolExecutor(max_workers=worker_count(threads)) as pool:
        rows = list(tqdm(pool.map(run, range(pairs)), total=pairs, desc="sandwich", disable=quiet))
    violations = sum(1 for row in rows if not row.holds)
    logger.info("Sandwich over %d D pairs: %d violations", pairs, violations)
    return rows


def sandwich_frame(rows: Iterable[SandwichRow]) -> pd.DataFrame:
    """Rows as a table with the columns of SandwichRow."""
    return pd.DataFrame([row.to_dict() for row in rows], columns=list(SandwichRow.model_fields))


# -- neighbourhood classes -----------------------------------------------------------------


def neighbourhood_matrix(g: Graphon, sample_count: int, seed: int, depth: int = STRATUM_DEPTH
                         ) -> Tuple[np.ndarray, np.ndarray]:
    """Sampled neighbourhood functions on shared quadrature points, with the point weights."""
    anchors = lattice_uniform(generator(seed, 0), sample_count)
    starts, ends = strata(g, depth)
    y, w = stratified_points(starts, ends, CLASS_POINTS)
    rows = [g.evaluate(np.full(y.shape, a), y) for a in anchors]
    return np.vstack(rows), w


def _grow_net(functions: np.ndarray, weights: np.ndarray, eps: float, centers: List[int]) -> List[int]:
    for i in range(functions.shape[0]):
        if centers and float((np.abs(functions[centers] - functions[i]) @ weights).min()) <= eps:
            continue
        centers.append(i)
    return centers


def class_counts(g: Graphon, eps_list: Iterable[float], sample_count: int = 500, seed: int = 0,
                 depth: int = STRATUM_DEPTH) -> Dict[float, int]:
    """
    Greedy L1 covering numbers of sampled neighbourhood functions for several radii.

    Nets are built from the largest radius down and every net keeps the centres of the
    previous one, so the counts never decrease as the radius shrinks. The counts
    estimate how many neighbourhood classes the sample shows; they certify nothing
    about regular partitions.

    Returns:
        Dict[float, int]: Number of centres per radius.
    """
    radii = sorted(set(float(eps) for eps in eps_list), reverse=True)
    if any(eps <= 0 for eps in radii):
        raise ValueError("radii must be positive")
    functions, weights = neighbourhood_matrix(g, sample_count, seed, depth)
    centers: List[int] = []
    counts = {}
    for eps in radii:
        centers = _grow_net(functions, weights, eps, list(centers))
        counts[eps] = len(centers)
        logger.info("eps=%g: %d classes among %d sampled vertices", eps, len(centers), sample_count)
    return counts


def epsilon_classes(g: Graphon, eps: float, sample_count: int = 500, seed: int = 0,
                    depth: int = STRATUM_DEPTH) -> int:
    """Greedy covering number of sampled neighbourhood functions at radius eps."""
    return class_counts(g, [eps], sample_count, seed, depth)[float(eps)]
