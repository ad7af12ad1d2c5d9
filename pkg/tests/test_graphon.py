import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from src.exceptions import InvalidStep, LayoutMismatch
from src.geometry.dyadic import snap
from src.graphon.core import PartitionedLayout
from src.graphon.kernels import (
    CheckerKernel,
    ConstantKernel,
    FirstLevelKernel,
    HalfKernel,
    ShiftedCheckerKernel,
    constant,
    diagonal_checker,
    half_graphon,
    shifted_checker,
    step_graphon,
)
from src.graphon.partitioned import PartitionedGraphon, parse_pair
from src.graphon.spec_file import GraphonSpecFile, builtin, load_graphon
from src.state.models import PartSpec

GRID = snap((np.arange(4096) + 0.5) / 4096)
unit = st.floats(min_value=0.0, max_value=0.999999, allow_nan=False)


def numeric_row_degree(kernel, s):
    return kernel.values(np.full(GRID.size, s), GRID).mean()


@pytest.mark.parametrize("kernel", [CheckerKernel(), HalfKernel(), ShiftedCheckerKernel(), FirstLevelKernel(),
                                    ConstantKernel(Fraction(3, 10))])
@pytest.mark.parametrize("s", [0.0, 0.3, 0.55, 0.8, 0.93, 0.99])
def test_analytic_row_degree_matches_grid(kernel, s):
    s = float(snap(np.array([s]))[0])
    assert kernel.row_degree(np.array([s]))[0] == pytest.approx(numeric_row_degree(kernel, s), abs=1e-3)
    assert kernel.col_degree(np.array([s]))[0] == pytest.approx(numeric_row_degree(kernel.transpose(), s), abs=1e-3)


@pytest.mark.parametrize("kernel", [CheckerKernel(), HalfKernel(), ShiftedCheckerKernel(), FirstLevelKernel()])
def test_density_matches_grid(kernel):
    t = GRID[::16]
    s, t = np.meshgrid(t, t, indexing="ij")
    assert float(kernel.density()) == pytest.approx(kernel.values(s.ravel(), t.ravel()).mean(), abs=1e-2)


def test_checker_level_degrees():
    kernel = CheckerKernel()
    s = np.array([0.1, 0.6, 0.8])
    assert list(kernel.row_level_degree(s, 2)) == [0.0, 1.0, 0.0]
    assert list(kernel.row_degree(s)) == [0.5, 0.25, 0.125]


@given(unit, unit)
def test_transpose_swaps_arguments(s, t):
    kernel = ShiftedCheckerKernel()
    s, t = snap(np.array([s, t]))
    assert kernel.transpose().eval(s, t) == kernel.eval(t, s)
    assert kernel.transpose().transpose() is kernel


def test_constant_kernel_range():
    with pytest.raises(ValueError):
        ConstantKernel(1.5)
    assert ConstantKernel(0.25).density() == Fraction(1, 4)


@pytest.mark.parametrize("graphon", [constant(0.3), half_graphon(), diagonal_checker(20)])
@given(x=unit, y=unit)
def test_primitive_graphons_symmetric(graphon, x, y):
    x, y = snap(np.array([x, y]))
    assert graphon.eval(x, y) == graphon.eval(y, x)


def test_primitive_edge_densities():
    assert constant(0.3).edge_density() == Fraction(3, 10)
    assert half_graphon().edge_density() == Fraction(1, 2)
    assert diagonal_checker().edge_density() == Fraction(1, 3)


def test_step_graphon_validation():
    with pytest.raises(InvalidStep):
        step_graphon([[0.1, 0.2], [0.3, 0.1]], [0.5, 0.5])
    with pytest.raises(InvalidStep):
        step_graphon([[0.1]], [0.5])
    with pytest.raises(InvalidStep):
        step_graphon([[0.1, 0.2], [0.2, 1.5]], [0.5, 0.5])


def test_step_graphon_degrees_and_density():
    g = step_graphon([[1.0, 0.0], [0.0, 0.5]], [Fraction(1, 4), Fraction(3, 4)], names=["X", "Y"])
    assert g.edge_density() == Fraction(1, 16) + Fraction(9, 32)
    np.testing.assert_allclose(g.degree(np.array([0.1, 0.9])), [0.25, 0.375])
    assert g.eval(0.1, 0.9) == 0.0


def test_layout_validation():
    with pytest.raises(ValueError):
        PartitionedLayout([PartSpec(name="X", measure="1/2")])
    with pytest.raises(ValueError):
        PartitionedLayout([PartSpec(name="X", measure="1/2"), PartSpec(name="X", measure="1/2")])
    with pytest.raises(ValueError):
        PartitionedLayout([PartSpec(name="X", measure="1/2", degree=0.1),
                           PartSpec(name="Y", measure="1/2", degree=0.1)])
    with pytest.raises(ValidationError):
        PartSpec(name="X", measure=0)


def test_layout_locate_and_scale():
    layout = PartitionedLayout([PartSpec(name="X", measure="1/4"), PartSpec(name="Y", measure="3/4")])
    idx, s = layout.locate(np.array([0.0, 0.125, 0.25, 0.625]))
    assert list(idx) == [0, 0, 1, 1]
    np.testing.assert_array_equal(s, [0.0, 0.5, 0.0, 0.5])
    np.testing.assert_array_equal(layout.to_global(idx, s), [0.0, 0.125, 0.25, 0.625])
    assert layout.preimage_measure("Y", Fraction(0), Fraction(1, 2)) == Fraction(3, 8)
    with pytest.raises(LayoutMismatch):
        layout.index("Z")


def two_part_graphon():
    layout = PartitionedLayout([PartSpec(name="X", measure="1/2"), PartSpec(name="Y", measure="1/2")])
    return PartitionedGraphon(layout, {("X", "Y"): FirstLevelKernel(), ("Y", "Y"): HalfKernel()}, name="two")


def test_partitioned_mirrors_kernels():
    g = two_part_graphon()
    assert g.kernel("Y", "X").eval(0.25, 0.9) == g.kernel("X", "Y").eval(0.9, 0.25)
    assert g.kernel("X", "X").density() == 0
    assert g.is_listed("Y", "X")
    assert g.part_degree("X") == Fraction(1, 4)
    assert g.edge_density() == Fraction(1, 2) * Fraction(1, 4) + Fraction(1, 2) * (
        Fraction(1, 2) * Fraction(1, 2) + Fraction(1, 2) * Fraction(1, 2))


def test_partitioned_rejects_asymmetric_diagonal():
    layout = PartitionedLayout([PartSpec(name="X", measure=1)])
    with pytest.raises(InvalidStep):
        PartitionedGraphon(layout, {("X", "X"): FirstLevelKernel()})


def test_mutation_replaces_kernel_and_mirror():
    g = two_part_graphon().mutated(("X", "Y"))
    assert g.kernel("X", "Y").density() == Fraction(1, 2)
    assert g.kernel("Y", "X").density() == Fraction(1, 2)
    again = g.mutated(("Y", "X"))
    assert again.kernel("X", "Y").density() == 0


@pytest.mark.parametrize("text", ["A1xB1", "A1,B1", " A1 x B1 "])
def test_parse_pair(text):
    assert parse_pair(text) == ("A1", "B1")


def test_parse_pair_rejects_garbage():
    with pytest.raises(ValueError):
        parse_pair("A1B1")


def test_builtin_names():
    assert builtin("constant(p=0.3)").p == pytest.approx(0.3)
    assert builtin("checker(L=12)").depth == 12
    assert builtin("half").name == "half"
    assert builtin("hypercubical(L=20)").depth == 20
    with pytest.raises(ValueError):
        builtin("bogus")
    with pytest.raises(ValueError):
        builtin("hypercubical(recipe=peano)")


SPEC = {
    "name": "two-blocks",
    "parts": [{"name": "X", "measure": "1/3"}, {"name": "Y", "measure": "2/3"}],
    "kernels": [{"pair": ["X", "Y"], "kernel": "constant", "p": 0.5},
                {"pair": ["Y", "Y"], "kernel": "checker"}],
}


def test_spec_file_round_trip(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(SPEC))
    g = load_graphon(str(path))
    assert g.name == "two-blocks"
    assert g.block_density("Y", "Y") == Fraction(1, 3)
    assert g.block_density("Y", "X") == Fraction(1, 2)


def test_spec_file_rejects_unknown_kernel():
    bad = dict(SPEC, kernels=[{"pair": ["X", "Y"], "kernel": "spiral"}])
    with pytest.raises(ValidationError):
        GraphonSpecFile.model_validate(bad)


def test_shifted_checker_pairs_consecutive_levels():
    kernel = shifted_checker()
    assert kernel.eval(0.6, 0.1) == 1.0
    assert kernel.eval(0.1, 0.6) == 0.0
    assert kernel.density() == Fraction(1, 6)
