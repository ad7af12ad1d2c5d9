from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.exceptions import NoLevel, PrecisionExceeded
from src.geometry.dyadic import (
    SCALE,
    LevelPos,
    level_bounds,
    level_measure,
    level_of,
    levels,
    reconstruct,
    snap,
    to_lattice,
    truncated_mass,
)

lattice_points = st.integers(min_value=0, max_value=SCALE - 1).map(lambda a: a / SCALE)


def test_level_of_examples():
    assert level_of(0.0) == LevelPos(1, 0.0)
    assert level_of(0.875) == LevelPos(4, 0.0)
    pos = level_of(0.6)
    assert pos.level == 2
    assert pos.rel == pytest.approx(0.4, abs=1e-15)


def test_reconstruct_examples():
    assert reconstruct(LevelPos(1, 0.0)) == 0.0
    assert reconstruct(LevelPos(3, 0.5)) == 0.875
    assert reconstruct(level_of(0.6)) == 0.6


def test_one_has_no_level():
    with pytest.raises(NoLevel):
        level_of(1.0)
    with pytest.raises(NoLevel):
        levels(np.array([0.25, 1.0]))


def test_off_lattice_rejected():
    with pytest.raises(PrecisionExceeded):
        to_lattice(Fraction(1, 3))
    with pytest.raises(ValueError):
        to_lattice(1.5)


def test_level_measure():
    assert level_measure(1) == Fraction(1, 2)
    assert level_measure(3, Fraction(1, 27)) == Fraction(1, 216)
    with pytest.raises(ValueError):
        level_measure(0)


@pytest.mark.parametrize("depth", [1, 5, 30, 60])
def test_truncated_mass(depth):
    assert truncated_mass(depth) == 1 - Fraction(1, 2 ** depth)


@given(lattice_points)
def test_round_trip(x):
    assert reconstruct(level_of(x)) == x


@given(lattice_points)
def test_point_inside_its_level(x):
    pos = level_of(x)
    start, end = level_bounds(pos.level)
    assert start <= x < end
    assert 0.0 <= pos.rel < 1.0


@given(lattice_points, lattice_points)
def test_rel_monotone_within_level(x, y):
    px, py = level_of(x), level_of(y)
    if px.level == py.level and x < y:
        assert px.rel < py.rel


@given(st.lists(lattice_points, min_size=1, max_size=50))
def test_vectorised_matches_scalar(xs):
    lvl, rel = levels(np.asarray(xs))
    for x, k, r in zip(xs, lvl, rel):
        assert level_of(x) == LevelPos(int(k), float(r))


def test_snap_stays_below_one():
    out = snap(np.array([0.0, 0.3, 1.0, 0.9999999999999999999]))
    assert np.all(out < 1.0)
    assert out[0] == 0.0
    assert np.all(out * SCALE == np.floor(out * SCALE))
