from fractions import Fraction

import numpy as np
import pytest

from src.density.engine import (
    MONTE_CARLO,
    QUADRATURE,
    decorated_density,
    density,
    relative_degree,
    rooted_density,
    rooted_expectation,
    sample_roots,
)
from src.density.quadrature import quadrature_density
from src.density.streams import chunk_sizes, derive_seed, generator, map_chunks
from src.exceptions import LayoutMismatch, RootsIncompatible, TooLarge
from src.graph.builder import GraphBuilder, complete, cycle, decorated_edge, graph_types, named_graph, path
from src.graphon.hypercube import build
from src.graphon.kernels import constant, diagonal_checker, half_graphon, step_graphon
from src.state.models import DensityEstimate, EstimatorKind

BUDGET = 200_000


@pytest.fixture(scope="module")
def w():
    return build()


def step():
    return step_graphon([[0.9, 0.2, 0.4], [0.2, 0.1, 0.7], [0.4, 0.7, 0.5]],
                        [Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])


def test_constant_graphon_closed_forms():
    g = constant(Fraction(1, 2))
    assert quadrature_density(complete(2), g).value == pytest.approx(0.5)
    assert quadrature_density(complete(3), g).value == pytest.approx(1 / 8)
    assert quadrature_density(cycle(4), g).value == pytest.approx(3 / 64)
    assert quadrature_density(path(3), g).value == pytest.approx(3 / 8)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_induced_densities_sum_to_one(n):
    g = step()
    total = sum(quadrature_density(h, g).value for h in graph_types(n))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_free_pairs_add_up():
    g = step()
    graph = named_graph("K2x2-disjoint-free")
    parts = sum(quadrature_density(r, g).value for r in graph.resolutions())
    assert quadrature_density(graph, g).value == pytest.approx(parts, abs=1e-12)


def test_checker_edge_density():
    kappa = diagonal_checker(30)
    exact = quadrature_density(complete(2), kappa)
    assert exact.kind == EstimatorKind.QUADRATURE
    assert exact.stderr == 0.0
    assert exact.value == pytest.approx(1 / 3, abs=1e-9)
    estimate = density(complete(2), kappa, budget=BUDGET, seed=1)
    assert estimate.kind == EstimatorKind.MONTE_CARLO
    assert abs(estimate.value - 1 / 3) <= 4 * estimate.stderr


def test_monte_carlo_agrees_with_quadrature():
    g = step()
    for h in (complete(3), path(3), cycle(4)):
        exact = quadrature_density(h, g).value
        estimate = density(h, g, budget=BUDGET, seed=7, method=MONTE_CARLO)
        assert abs(estimate.value - exact) <= 4 * estimate.stderr + 1e-12


def test_monte_carlo_is_deterministic_across_thread_counts():
    g = half_graphon()
    one = density(complete(3), g, budget=150_000, seed=5, threads=1)
    many = density(complete(3), g, budget=150_000, seed=5, threads=4)
    assert one == many


def test_quadrature_limits():
    with pytest.raises(TooLarge):
        quadrature_density(complete(5), constant(0.5))
    with pytest.raises(ValueError):
        quadrature_density(named_graph("K2r"), constant(0.5))
    with pytest.raises(ValueError):
        density(named_graph("K2r"), constant(0.5))


def test_decorated_densities(w):
    exact = density(decorated_edge("F", "B1"), w, method=QUADRATURE)
    assert exact.value == pytest.approx(0.4, abs=1e-12)
    estimate = decorated_density(decorated_edge("A0", "A1"), w, budget=BUDGET, seed=2)
    assert abs(estimate.value - 0.5) <= 4 * estimate.stderr
    zero = decorated_density(decorated_edge("A0", "A2"), w, budget=10_000, seed=2)
    assert zero.value == 0.0


def test_decorated_density_needs_known_parts(w):
    with pytest.raises(LayoutMismatch):
        decorated_density(decorated_edge("A0", "Z9"), w, budget=100, seed=0)
    with pytest.raises(LayoutMismatch):
        density(decorated_edge("A0", "A1"), constant(0.5), budget=100, seed=0)


def test_rooted_density_on_half_graphon():
    g = half_graphon()
    for x in (0.25, 0.75):
        estimate = rooted_density(named_graph("K2r"), g, [x], budget=BUDGET, seed=3)
        assert abs(estimate.value - x) <= 4 * estimate.stderr + 1e-9


def test_rooted_density_constant_is_exact():
    estimate = rooted_density(named_graph("K2r"), constant(0.3), [0.5], budget=1000, seed=0)
    assert estimate.value == pytest.approx(0.3)
    assert estimate.stderr == pytest.approx(0.0, abs=1e-15)


def test_incompatible_roots():
    rooted_edge = GraphBuilder(2).edge(0, 1).roots(0, 1).build()
    with pytest.raises(RootsIncompatible):
        rooted_density(rooted_edge, half_graphon(), [0.1, 0.2], budget=100, seed=0)
    with pytest.raises(RootsIncompatible):
        sample_roots(rooted_edge, constant(0), count=4, seed=0)


def test_sampled_roots_induce_the_root_graph():
    rooted_edge = GraphBuilder(3).edge(0, 1).edge(1, 2).roots(0, 1).build()
    roots = sample_roots(rooted_edge, half_graphon(), count=50, seed=4)
    assert len(roots) == 50
    assert all(sum(r.coords) >= 1.0 and r.weight == 1.0 for r in roots)


def test_rooted_expectation_is_mean_degree():
    estimate = rooted_expectation(named_graph("K2r"), half_graphon(), budget=BUDGET, seed=6)
    assert abs(estimate.value - 0.5) <= 4 * estimate.stderr


def test_relative_degree(w):
    f_point = float(w.layout.to_global(np.array([w.layout.index("F")]), np.array([0.5]))[0])
    assert relative_degree(w, f_point, "B1") == pytest.approx(0.4)
    assert relative_degree(w, f_point, "A0") == 0.0


def test_streams():
    assert chunk_sizes(0) == []
    assert chunk_sizes(10, chunk=4) == [4, 4, 2]
    assert derive_seed(1, 2) == derive_seed(1, 2) != derive_seed(1, 3)
    a = generator(3, 1).random(5)
    b = generator(3, 1).random(5)
    np.testing.assert_array_equal(a, b)
    assert map_chunks(lambda i, size: (i, size), [3, 2], threads=2) == [(0, 3), (1, 2)]


def test_estimate_from_samples():
    estimate = DensityEstimate.from_samples(np.array([0.0, 1.0, 1.0, 0.0]))
    assert estimate.kind == EstimatorKind.MONTE_CARLO
    assert estimate.value == 0.5
    assert estimate.stderr == pytest.approx(np.sqrt(1 / 3) / 2)
    assert DensityEstimate.from_samples([0.25]).stderr == 0.0
    with pytest.raises(ValueError):
        DensityEstimate.from_samples([])
