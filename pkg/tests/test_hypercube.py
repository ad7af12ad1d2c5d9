from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.density.streams import generator, lattice_uniform
from src.geometry.dyadic import snap
from src.graphon.hypercube import (
    CORE_PARTS,
    E1_DEGREE,
    E2_DEGREE,
    F_DENSITIES,
    LEVELED_PARTS,
    PART_MEASURES,
    PART_NAMES,
    PART_DEGREES,
    HypercubeGraphon,
    build,
    product_tail,
)
from src.graphon.kernels import ConstantKernel

PROBES = snap(np.linspace(0.003, 0.997, 10))
unit = st.floats(min_value=0.0, max_value=0.999999, allow_nan=False)


@pytest.fixture(scope="module")
def w():
    return build()


def test_part_measures(w):
    assert sum(PART_MEASURES.values()) == 1
    assert w.layout.names == list(PART_NAMES)
    assert w.layout.measure("E1") == Fraction(11, 27)
    assert w.layout.measure("E2") == Fraction(4, 27)
    assert HypercubeGraphon.level_measure(3) == Fraction(1, 216)


@pytest.mark.parametrize("part", list(CORE_PARTS) + ["D", "F"])
def test_part_degrees(w, part):
    np.testing.assert_allclose(w.degree(part, PROBES), float(PART_DEGREES[part]), atol=1e-6)


def test_degrees_pairwise_distinct(w):
    degrees = [w.expected_degree(x) for x in PART_NAMES]
    assert len(set(degrees)) == len(degrees)


def test_e_degrees_exact(w):
    assert w.e1() == E1_DEGREE == Fraction(206, 693)
    assert w.e2() == E2_DEGREE == Fraction(5, 216)
    assert Fraction(5, 27) < w.e1() <= Fraction(10, 27)
    assert 0 < w.e2() <= Fraction(1, 27)


def test_e_degrees_monte_carlo(w):
    e1, e2 = w.estimate_e1_e2(samples=200_000, seed=3)
    assert 5 / 27 + 3 * e1.stderr < e1.value <= 10 / 27 - 3 * e1.stderr
    assert 0 < e2.value - 3 * e2.stderr and e2.value + 3 * e2.stderr <= 1 / 27
    assert abs(e1.value - float(E1_DEGREE)) <= 4 * e1.stderr
    assert abs(e2.value - float(E2_DEGREE)) <= 4 * e2.stderr


@settings(max_examples=200, deadline=None)
@given(unit, unit)
def test_symmetric(w, x, y):
    x, y = snap(np.array([x, y]))
    assert w.eval(x, y) == w.eval(y, x)


def test_symmetric_on_random_points(w):
    rng = generator(17, 0)
    x, y = lattice_uniform(rng, 20_000), lattice_uniform(rng, 20_000)
    np.testing.assert_array_equal(w.evaluate(x, y), w.evaluate(y, x))


@pytest.mark.parametrize("pair", [("A0", "A2"), ("A0", "A0"), ("B2", "B3"), ("D", "D"), ("E1", "E2"), ("F", "F"),
                                  ("D", "A1"), ("E2", "A0")])
def test_zero_blocks(w, pair):
    rng = generator(5, 1)
    s, t = lattice_uniform(rng, 10_000), lattice_uniform(rng, 10_000)
    assert np.max(w.evaluate_in(pair[0], s, pair[1], t)) == 0.0


@pytest.mark.parametrize("part", list(F_DENSITIES))
def test_pseudorandom_f_densities(w, part):
    assert w.block_density("F", part) == F_DENSITIES[part]
    assert isinstance(w.kernel("F", part), ConstantKernel) or F_DENSITIES[part] == 0


def test_checker_block_density(w):
    assert w.block_density("A1", "A1") == Fraction(1, 3)
    assert w.block_density("A1", "A3") == Fraction(1, 6)


@pytest.mark.parametrize("part", LEVELED_PARTS)
def test_level_membership(w, part):
    assert list(w.level_membership(part, [0.0, 0.5, 0.75, 0.875])) == [1, 2, 3, 4]


def test_level_membership_rejects_unleveled(w):
    with pytest.raises(ValueError):
        w.level_membership("C", [0.1])


def test_product_relations(w):
    rng = generator(9, 2)
    b = lattice_uniform(rng, 100)
    for i in range(1, 6):
        prod = np.ones(b.size)
        coprod = np.ones(b.size)
        for j in range(1, i + 1):
            c = w.relative_level_degree("B1", b, "B2", j)
            prod, coprod = prod * c, coprod * (1.0 - c)
        levels = w.level_membership("B1", b)
        np.testing.assert_allclose(w.relative_level_degree("B1", b, "B4", i), np.where(levels >= i, prod, 0.0),
                                   atol=1e-9)
        np.testing.assert_allclose(w.relative_level_degree("B1", b, "B5", i), np.where(levels >= i, coprod, 0.0),
                                   atol=1e-9)


def test_infinite_box_equals_infinite_product(w):
    d = lattice_uniform(generator(4, 0), 200)
    for k in range(1, 8):
        np.testing.assert_allclose(w.relative_level_degree("D", d, "B1", k), w.relative_level_degree("D", d, "B4", k),
                                   atol=1e-12)


def test_d_level_degrees_are_recipe_coordinates(w):
    d = lattice_uniform(generator(4, 1), 50)
    coords = w.d_coordinates(d, 6)
    for i in range(1, 7):
        np.testing.assert_array_equal(w.relative_level_degree("D", d, "B2", i), coords[:, i - 1])


def test_product_tail_matches_simulation():
    rng = np.random.default_rng(0)
    u = rng.random((200_000, 3)).prod(axis=1)
    for rho in (0.05, 0.2, 0.6):
        assert product_tail(3, np.array([rho]))[0] == pytest.approx(np.mean(u >= rho), abs=5e-3)
    assert product_tail(1, np.array([0.25]))[0] == pytest.approx(0.75)


def test_degree_profile_sums_to_total(w):
    profile = w.degree_profile("B1", 0.3)
    weighted = sum(float(w.layout.measure(y)) * v for y, v in profile.per_part.items())
    assert weighted == pytest.approx(profile.total)
    assert profile.total == pytest.approx(float(PART_DEGREES["B1"]), abs=1e-9)


def test_mutation_is_a_new_graphon(w):
    mutated = w.mutated(("A1", "B1"))
    assert mutated.name == "hypercubical[mutated]"
    assert mutated.block_density("A1", "B1") == Fraction(1, 2)
    assert w.block_density("A1", "B1") == Fraction(1, 3)
    assert mutated.kernel("B1", "A1").eval(0.1, 0.9) == 0.5


def test_mutating_f_breaks_its_degree(w):
    mutated = w.mutated(("F", "B1"))
    assert mutated.part_degree("F") != w.part_degree("F")


def test_truncation_depth_validated():
    with pytest.raises(ValueError):
        HypercubeGraphon(depth=0)


def test_eval_pair_kernel_uses_scaled_coordinates(w):
    assert w.eval_pair_kernel("F", "C", 0.3, 0.7) == pytest.approx(0.9)
    assert w.eval_pair_kernel("A1", "A1", 0.1, 0.2) == 1.0
    assert w.eval_pair_kernel("A1", "A1", 0.1, 0.6) == 0.0
    assert w.eval_pair_kernel("A0", "A2", 0.1, 0.2) == 0.0
