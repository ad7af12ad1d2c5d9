"""
Bijective recipe built on binary digit interleaving.

r_n sends x = 0.b_1 b_2 ... b_P (binary) to the point of [0, 1]^n whose i-th coordinate
collects the digits of one lane: for finite n the lane of coordinate i is
b_i, b_{i+n}, b_{i+2n}, ...; for n = infinity digit positions are dealt out along the
Cantor enumeration (1,1), (1,2), (2,1), (1,3), (2,2), (3,1), ... of (coordinate, digit)
pairs. Lanes are disjoint, so the coordinates of a uniform x are independent and
uniform on their own lattices.
"""
import logging
import math
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src.density.streams import generator
from src.exceptions import PrecisionExceeded
from src.geometry.dyadic import PRECISION, to_lattice
from src.state.models import DensityEstimate

logger = logging.getLogger(__name__)

INFINITY = math.inf
Arity = Union[int, float]

# Exhaustive enumeration walks all 2^P inputs.
EXHAUSTIVE_MAX_PRECISION = 24


class CoordVector(NamedTuple):
    """Image of a point under r_n; for n = infinity only a prefix is stored."""

    n: Arity
    coords: Tuple[float, ...]

    def coordinate(self, i: int) -> float:
        """1-based coordinate access; coordinates past a stored infinite prefix are 0."""
        if i < 1:
            raise IndexError("coordinates are 1-based")
        if i > len(self.coords):
            if math.isinf(self.n):
                return 0.0
            raise IndexError(f"coordinate {i} of a {self.n}-dimensional vector")
        return self.coords[i - 1]


def _check_arity(n: Arity) -> None:
    if math.isinf(n):
        return
    if int(n) != n or n < 1:
        raise ValueError(f"recipe arity must be a positive integer or infinity, got {n}")


def cantor_lanes(precision: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Coordinate (0-based) and digit index (1-based) of each digit position for n = infinity.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Two arrays of length precision.
    """
    coords: List[int] = []
    digits: List[int] = []
    diagonal = 1
    while len(coords) < precision:
        for i in range(1, diagonal + 1):
            if len(coords) == precision:
                break
            coords.append(i - 1)
            digits.append(diagonal + 1 - i)
        diagonal += 1
    return np.asarray(coords, dtype=np.int64), np.asarray(digits, dtype=np.int64)


class Recipe:
    """
    The digit-interleaving recipe {r_n : n in N and infinity}.

    Attributes:
        precision (int): Number of binary digits P of an input.
        infinite_depth (int): Length of the stored prefix of r_infinity(x).
    """

    def __init__(self, precision: int = PRECISION, infinite_depth: int = 30):
        if not 1 <= precision <= 62:
            raise ValueError("precision must lie in [1, 62]")
        self.precision = precision
        self.infinite_depth = infinite_depth
        self._cantor_coord, self._cantor_digit = cantor_lanes(precision)

    def __repr__(self) -> str:
        return f"Recipe(precision={self.precision}, infinite_depth={self.infinite_depth})"

    # -- lane bookkeeping -------------------------------------------------------------

    def lane(self, n: Arity, position: int) -> Tuple[int, int]:
        """(coordinate, digit index) fed by the digit at 1-based position."""
        if math.isinf(n):
            return int(self._cantor_coord[position - 1]) + 1, int(self._cantor_digit[position - 1])
        return (position - 1) % int(n) + 1, (position - 1) // int(n) + 1

    def lane_lengths(self, n: Arity, width: Optional[int] = None) -> List[int]:
        """
        Number of digits each coordinate receives.

        Args:
            n (Arity): Recipe arity.
            width (Optional[int]): Number of coordinates to report (defaults to n, or to
                the stored prefix for n = infinity).

        Returns:
            List[int]: Lane lengths of coordinates 1..width.
        """
        _check_arity(n)
        if width is None:
            width = self.infinite_depth if math.isinf(n) else int(n)
        lengths = [0] * width
        for position in range(1, self.precision + 1):
            coord, _ = self.lane(n, position)
            if coord <= width:
                lengths[coord - 1] += 1
        return lengths

    def populated_coordinates(self, n: Arity) -> int:
        """Number of leading coordinates that receive at least one digit."""
        return sum(1 for length in self.lane_lengths(n, self.precision) if length > 0)

    # -- scalar interface --------------------------------------------------------------

    def apply(self, n: Arity, x: float) -> CoordVector:
        """
        Evaluate r_n(x).

        Args:
            n (Arity): Dimension, a positive integer or INFINITY.
            x (float): A lattice coordinate in [0, 1).

        Returns:
            CoordVector: The coordinates; a prefix of length infinite_depth when n is infinite.
        """
        _check_arity(n)
        a = to_lattice(x, self.precision)
        if a >= 1 << self.precision:
            raise ValueError("recipes are defined on [0, 1)")
        width = self.infinite_depth if math.isinf(n) else int(n)
        coords = self.apply_lattice(n, np.asarray([a], dtype=np.int64), width)[0]
        return CoordVector(n, tuple(float(c) for c in coords))

    def invert(self, n: Arity, v: Union[CoordVector, Sequence[float]]) -> float:
        """
        Recover x from r_n(x).

        Args:
            n (Arity): Dimension used for the forward map.
            v (CoordVector | Sequence[float]): The coordinates.

        Returns:
            float: The unique lattice point x with r_n(x) = v.

        Raises:
            PrecisionExceeded: If a coordinate carries more digits than its lane holds.
        """
        _check_arity(n)
        coords = list(v.coords if isinstance(v, CoordVector) else v)
        if not math.isinf(n) and len(coords) != int(n):
            raise ValueError(f"expected {int(n)} coordinates, got {len(coords)}")
        a = self.invert_lattice(n, np.asarray([coords], dtype=np.float64))[0]
        return int(a) / float(1 << self.precision)

    def coordinate(self, x: float, i: int) -> float:
        """(r_infinity(x))_i for any i >= 1, without materialising a prefix."""
        a = to_lattice(x, self.precision)
        value = Fraction(0)
        for position in range(1, self.precision + 1):
            coord, digit = self.lane(INFINITY, position)
            if coord == i and (a >> (self.precision - position)) & 1:
                value += Fraction(1, 1 << digit)
        return float(value)

    # -- vectorised interface ----------------------------------------------------------

    def apply_lattice(self, n: Union[Arity, np.ndarray], a: np.ndarray, width: int) -> np.ndarray:
        """
        Vectorised r_n on lattice integers.

        Args:
            n (Arity | np.ndarray): One arity for all rows, or an int array (one per row).
            a (np.ndarray): Lattice integers x * 2^P.
            width (int): Number of coordinates to return; missing ones are zero.

        Returns:
            np.ndarray: Array of shape (len(a), width).
        """
        a = np.asarray(a, dtype=np.int64).reshape(-1)
        out = np.zeros((a.size, max(width, 0)), dtype=np.float64)
        if width <= 0 or a.size == 0:
            return out
        rows = np.arange(a.size)
        infinite = np.isscalar(n) and math.isinf(n)
        if not infinite:
            arity = np.broadcast_to(np.asarray(n, dtype=np.int64), a.shape)
            if np.any(arity < 1):
                raise ValueError("recipe arity must be positive")
        for position in range(1, self.precision + 1):
            bit = ((a >> (self.precision - position)) & 1).astype(np.float64)
            if infinite:
                coord = int(self._cantor_coord[position - 1])
                if coord < width:
                    out[:, coord] += np.ldexp(bit, -int(self._cantor_digit[position - 1]))
                continue
            coord = (position - 1) % arity
            digit = (position - 1) // arity + 1
            mask = coord < width
            out[rows[mask], coord[mask]] += np.ldexp(bit[mask], -digit[mask])
        return out

    def invert_lattice(self, n: Union[Arity, np.ndarray], coords: np.ndarray) -> np.ndarray:
        """
        Vectorised inverse of apply_lattice.

        Args:
            n (Arity | np.ndarray): Arity per row (or shared).
            coords (np.ndarray): Array of shape (rows, width).

        Returns:
            np.ndarray: Lattice integers.

        Raises:
            PrecisionExceeded: If some row is not the image of a lattice point.
        """
        coords = np.atleast_2d(np.asarray(coords, dtype=np.float64))
        rows, width = coords.shape
        if np.any(coords < 0) or np.any(coords >= 1):
            raise PrecisionExceeded("recipe coordinates must lie in [0, 1)")
        infinite = np.isscalar(n) and math.isinf(n)
        arity = None if infinite else np.broadcast_to(np.asarray(n, dtype=np.int64), (rows,))
        a = np.zeros(rows, dtype=np.int64)
        index = np.arange(rows)
        for position in range(1, self.precision + 1):
            if infinite:
                coord = np.full(rows, int(self._cantor_coord[position - 1]))
                digit = np.full(rows, int(self._cantor_digit[position - 1]))
            else:
                coord = (position - 1) % arity
                digit = (position - 1) // arity + 1
            inside = coord < width
            values = np.zeros(rows)
            values[inside] = coords[index[inside], coord[inside]]
            bit = np.floor(np.ldexp(values, digit)).astype(np.int64) & 1
            a |= bit << (self.precision - position)
        if not np.array_equal(self.apply_lattice(n if infinite else arity, a, width), coords):
            raise PrecisionExceeded("coordinates need more digits than their lanes provide")
        return a

    # -- recipe identity ---------------------------------------------------------------

    def count_below(self, n: Arity, thresholds: Sequence[Union[float, Fraction]]) -> Fraction:
        """
        Exact measure of {x : (r_n(x))_i < a_i for i <= k} on the P-bit lattice.

        Lanes are disjoint, so the count factorises over coordinates; each truncated
        coordinate stands for the dyadic cell above it, hence the strict comparison.
        Equality with the product of the thresholds holds whenever every a_i is a
        multiple of 2^-(lane length of coordinate i).
        """
        _check_arity(n)
        k = len(thresholds)
        if not math.isinf(n) and k > int(n):
            raise ValueError("more thresholds than coordinates")
        lengths = self.lane_lengths(n, k)
        measure = Fraction(1)
        for a_i, length in zip(thresholds, lengths):
            a_i = Fraction(a_i)
            if not 0 <= a_i <= 1:
                raise ValueError("thresholds must lie in [0, 1]")
            cells = 1 << length
            below = min(math.ceil(a_i * cells), cells)
            measure *= Fraction(below, cells)
        return measure

    def count_below_exhaustive(self, n: Arity, thresholds: Sequence[Union[float, Fraction]]) -> Fraction:
        """Same measure as count_below, by enumerating every lattice input."""
        if self.precision > EXHAUSTIVE_MAX_PRECISION:
            raise ValueError(f"exhaustive enumeration needs precision <= {EXHAUSTIVE_MAX_PRECISION}")
        k = len(thresholds)
        a = np.arange(1 << self.precision, dtype=np.int64)
        coords = self.apply_lattice(n, a, k)
        limits = np.asarray([float(t) for t in thresholds], dtype=np.float64)
        hits = int(np.count_nonzero(np.all(coords < limits, axis=1)))
        return Fraction(hits, 1 << self.precision)

    def verify_recipe_property(self, n: Arity, k: int, thresholds: Sequence[float], samples: int,
                               seed: int) -> DensityEstimate:
        """
        Monte Carlo estimate of lambda({x : (r_n(x))_i < a_i for all i <= k}).

        Args:
            n (Arity): Recipe arity.
            k (int): Number of constrained coordinates.
            thresholds (Sequence[float]): a_1..a_k.
            samples (int): Number of uniform lattice inputs.
            seed (int): Root seed.

        Returns:
            DensityEstimate: Estimate whose target is the product of the thresholds.
        """
        _check_arity(n)
        if len(thresholds) != k:
            raise ValueError("need exactly k thresholds")
        if not math.isinf(n) and k > int(n):
            raise ValueError("k must not exceed n")
        rng = generator(seed, 0)
        a = rng.integers(0, 1 << self.precision, size=samples, dtype=np.int64)
        coords = self.apply_lattice(n, a, k)
        hits = np.all(coords < np.asarray(thresholds, dtype=np.float64), axis=1)
        estimate = DensityEstimate.from_samples(hits.astype(np.float64))
        logger.debug("recipe identity n=%s k=%d: %.6f +- %.6f", n, k, estimate.value, estimate.stderr)
        return estimate
