from fractions import Fraction

import pandas as pd
import pytest

from src.graph.builder import complete, named_graph, path
from src.graphon.kernels import constant, half_graphon
from src.graphon.spec_file import load_graphon
from src.monitoring.convergence import (
    REPORT_COLUMNS,
    TRIAL_COLUMNS,
    analyze_convergence,
    convergence_report,
    convergence_trials,
    gap_improvements,
    get_convergence_summary,
    target_density,
)
from src.state.models import EstimatorKind


def test_targets_use_quadrature_for_small_graphs():
    estimate = target_density(constant(Fraction(1, 2)), complete(3), budget=1000, seed=0)
    assert estimate.kind == EstimatorKind.QUADRATURE
    assert estimate.value == pytest.approx(1 / 8)


def test_trial_table():
    frame = convergence_trials(half_graphon(), [complete(2), path(3)], [20, 60], trials=3, seed=1, budget=20_000)
    assert list(frame.columns) == TRIAL_COLUMNS
    assert len(frame) == 2 * 2 * 3
    assert (frame["gap"] >= 0).all()
    assert set(frame["graph"]) == {complete(2).describe(), path(3).describe()}


def test_trials_are_reproducible():
    a = convergence_trials(half_graphon(), [complete(2)], [30], trials=2, seed=4, budget=10_000)
    b = convergence_trials(half_graphon(), [complete(2)], [30], trials=2, seed=4, budget=10_000)
    pd.testing.assert_frame_equal(a, b)


def test_gaps_shrink_with_the_order():
    graphs = [complete(2), complete(3)]
    frame = convergence_trials(half_graphon(), graphs, [20, 400], trials=6, seed=7, budget=50_000)
    for h in graphs:
        assert gap_improvements(frame, h.describe(), 20, 400) >= 4
    report = convergence_report(half_graphon(), graphs, [20, 400], trials=6, seed=7, budget=50_000)
    assert list(report.columns) == REPORT_COLUMNS
    analysis = analyze_convergence(report)
    assert all(info["shrinking"] for info in analysis.values())
    summary = get_convergence_summary(report)
    assert summary.startswith("## Convergence Summary")
    assert "shrinking" in summary


def test_empty_summary():
    assert get_convergence_summary(pd.DataFrame(columns=REPORT_COLUMNS)) == "No convergence data available."


@pytest.mark.slow
@pytest.mark.parametrize("name, required", [("constant(p=0.5)", 18), ("hypercubical", 18), ("checker", 15)])
def test_gaps_at_order_800_beat_order_50(name, required):
    graphs = [named_graph("K2"), named_graph("K3")]
    frame = convergence_trials(load_graphon(name), graphs, [50, 800], trials=20, seed=9, budget=200_000)
    for h in graphs:
        assert gap_improvements(frame, h.describe(), 50, 800) >= required
