"""
Exact dyadic arithmetic for the level decomposition of [0, 1].

The unit interval is cut into the half-open levels
[1 - 2^{1-k}, 1 - 2^{-k}) for k = 1, 2, ...; a point x is described by its level
<x> = k and its relative position <x>_rel = (x - (1 - 2^{1-k})) * 2^k inside that level.

Coordinates are floats restricted to the lattice k / 2^P (P = 53 by default), which
float64 represents exactly, so every operation here is exact.
"""
from fractions import Fraction
from typing import NamedTuple, Tuple, Union

import numpy as np

from src.exceptions import NoLevel, PrecisionExceeded

PRECISION = 53
SCALE = 1 << PRECISION

# A coordinate in [0, 1] lying on the 2^-P lattice.
UnitCoord = float
Number = Union[float, int, Fraction]


class LevelPos(NamedTuple):
    """Level index (>= 1) and relative position in [0, 1) of a point."""

    level: int
    rel: float


def to_lattice(x: Number, precision: int = PRECISION) -> int:
    """
    Convert a coordinate to its lattice numerator.

    Args:
        x (Number): A value in [0, 1].
        precision (int): Number of fractional bits P.

    Returns:
        int: The integer a with x = a / 2^P.

    Raises:
        PrecisionExceeded: If x is not a multiple of 2^-P.
        ValueError: If x lies outside [0, 1].
    """
    value = Fraction(x)
    if value < 0 or value > 1:
        raise ValueError(f"coordinate {x} outside [0, 1]")
    scaled = value * (1 << precision)
    if scaled.denominator != 1:
        raise PrecisionExceeded(f"{x} is not a multiple of 2^-{precision}")
    return scaled.numerator


def level_of(x: Number, precision: int = PRECISION) -> LevelPos:
    """
    Locate x in the level decomposition.

    Args:
        x (Number): A lattice coordinate in [0, 1).
        precision (int): Number of fractional bits P.

    Returns:
        LevelPos: (<x>, <x>_rel) with reconstruct() giving back x exactly.

    Raises:
        NoLevel: If x = 1.
    """
    scale = 1 << precision
    a = to_lattice(x, precision)
    if a >= scale:
        raise NoLevel("x = 1 lies in no level interval")
    gap = scale - a
    level = precision + 1 - (gap - 1).bit_length()
    rel_num = (a - scale + (1 << (precision + 1 - level))) << level
    return LevelPos(level, rel_num / scale)


def reconstruct(pos: LevelPos, precision: int = PRECISION) -> UnitCoord:
    """Inverse of level_of: 1 - 2^{1-k} + rel / 2^k."""
    level, rel = pos
    if level < 1 or not 0 <= rel < 1:
        raise ValueError(f"invalid level position {pos}")
    value = 1 - Fraction(1, 1 << (level - 1)) + Fraction(rel) / (1 << level)
    to_lattice(value, precision)
    return float(value)


def level_measure(k: int, part_measure: Number = 1) -> Fraction:
    """
    Measure of the k-th level of a part.

    Args:
        k (int): Level index, k >= 1.
        part_measure (Number): Measure of the part being levelled (1 for the unit
            interval, 1/27 for a part of the hypercubical graphon).

    Returns:
        Fraction: 2^{-k} * part_measure, exactly.
    """
    if k < 1:
        raise ValueError("levels are indexed from 1")
    return Fraction(1, 1 << k) * Fraction(part_measure)


def truncated_mass(depth: int) -> Fraction:
    """Total measure of levels 1..depth, equal to 1 - 2^-depth."""
    return sum((level_measure(k) for k in range(1, depth + 1)), Fraction(0))


def level_bounds(k: int) -> Tuple[float, float]:
    """Half-open interval [start, end) of level k."""
    return 1.0 - 2.0 ** (1 - k), 1.0 - 2.0 ** (-k)


def lattice_array(xs: np.ndarray) -> np.ndarray:
    """Vectorised to_lattice for float arrays already on the 2^-53 lattice."""
    scaled = np.asarray(xs, dtype=np.float64) * SCALE
    if np.any(scaled != np.floor(scaled)):
        raise PrecisionExceeded("array contains values off the 2^-53 lattice")
    return scaled.astype(np.int64)


def snap(xs: np.ndarray) -> np.ndarray:
    """Round values in [0, 1) down onto the lattice, keeping them below 1."""
    scaled = np.floor(np.asarray(xs, dtype=np.float64) * SCALE)
    return np.minimum(scaled, SCALE - 1) / SCALE


def levels(xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorised level_of.

    Args:
        xs (np.ndarray): Lattice coordinates in [0, 1).

    Returns:
        Tuple[np.ndarray, np.ndarray]: int64 levels and float64 relative positions.

    Raises:
        NoLevel: If any entry equals 1.
    """
    a = lattice_array(xs)
    if np.any(a >= SCALE):
        raise NoLevel("x = 1 lies in no level interval")
    gap_minus_one = (SCALE - a - 1).astype(np.float64)
    bit_length = np.frexp(gap_minus_one)[1].astype(np.int64)
    lvl = PRECISION + 1 - bit_length
    offset = np.left_shift(np.int64(1), PRECISION + 1 - lvl)
    rel_num = np.left_shift(a - SCALE + offset, lvl)
    return lvl, rel_num / SCALE


