"""
Convergence monitoring of W-random graphs: d(H, G_n) against d(H, W) along an order schedule.
"""
import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.density.engine import DEFAULT_BUDGET, MONTE_CARLO, QUADRATURE, density
from src.density.quadrature import MAX_ORDER as MAX_QUADRATURE_ORDER
from src.density.streams import derive_seed
from src.graph.graph_spec import GraphSpec
from src.graphon.core import Graphon
from src.sampler.wrandom import empirical_density, sample
from src.state.models import DensityEstimate

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = ["graph", "n", "trial", "density", "target", "gap"]
REPORT_COLUMNS = ["graph", "n", "trials", "mean", "sd", "target", "target_stderr", "mean_gap", "max_gap"]


def target_density(w: Graphon, h: GraphSpec, budget: int, seed: int,
                   threads: Optional[int] = None) -> DensityEstimate:
    """d(H, W) by quadrature for small graphs, by Monte Carlo otherwise."""
    method = QUADRATURE if h.n <= MAX_QUADRATURE_ORDER else MONTE_CARLO
    return density(h, w, budget, seed, method=method, threads=threads)


def target_densities(w: Graphon, graphs: Sequence[GraphSpec], budget: int, seed: int,
                     threads: Optional[int] = None) -> Dict[str, DensityEstimate]:
    return {h.describe(): target_density(w, h, budget, derive_seed(seed, 0, i), threads) for i, h in enumerate(graphs)}


def convergence_trials(w: Graphon, graphs: Sequence[GraphSpec], schedule: Sequence[int], trials: int, seed: int,
                       budget: int = DEFAULT_BUDGET, threads: Optional[int] = None, quiet: bool = True,
                       targets: Optional[Dict[str, DensityEstimate]] = None) -> pd.DataFrame:
    """
    One row per (graph, order, trial) with the empirical density and its gap to d(H, W).

    Trial t samples one graph per order from its own seed, shared by every pattern graph.

    Args:
        w (Graphon): The graphon.
        graphs (Sequence[GraphSpec]): Pattern graphs.
        schedule (Sequence[int]): Orders of the sampled graphs.
        trials (int): Trials per order.
        seed (int): Root seed.
        budget (int): Monte Carlo budget of targets and of large empirical densities.
        threads (Optional[int]): Worker cap.
        quiet (bool): Hide the progress bar.
        targets (Optional[Dict[str, DensityEstimate]]): Precomputed d(H, W) per graph name.

    Returns:
        pd.DataFrame: Columns graph, n, trial, density, target, gap.
    """
    targets = targets or target_densities(w, graphs, budget, seed, threads)
    rows: List[Dict[str, Any]] = []
    runs = [(n, t) for n in schedule for t in range(trials)]
    for n, t in tqdm(runs, desc=f"convergence {w.name}", disable=quiet):
        g = sample(w, n, derive_seed(seed, 1, n, t), threads)
        for i, h in enumerate(graphs):
            observed = empirical_density(g, h, budget, derive_seed(seed, 2, n, t, i), threads)
            target = targets[h.describe()].value
            rows.append({"graph": h.describe(), "n": n, "trial": t, "density": observed.value,
                         "target": target, "gap": abs(observed.value - target)})
    return pd.DataFrame(rows, columns=TRIAL_COLUMNS)


def convergence_report(w: Graphon, graphs: Sequence[GraphSpec], schedule: Sequence[int], trials: int, seed: int,
                       budget: int = DEFAULT_BUDGET, threads: Optional[int] = None,
                       quiet: bool = True) -> pd.DataFrame:
    """
    Mean and standard deviation of d(H, G_n) across trials for every graph and order, next to d(H, W).

    Returns:
        pd.DataFrame: Columns graph, n, trials, mean, sd, target, target_stderr, mean_gap, max_gap.
    """
    targets = target_densities(w, graphs, budget, seed, threads)
    frame = convergence_trials(w, graphs, schedule, trials, seed, budget, threads, quiet, targets)
    return summarize_trials(frame, targets)


def summarize_trials(frame: pd.DataFrame, targets: Optional[Dict[str, DensityEstimate]] = None) -> pd.DataFrame:
    """Aggregate a trial table per (graph, n)."""
    grouped = frame.groupby(["graph", "n"], sort=False)
    report = grouped.agg(trials=("trial", "count"), mean=("density", "mean"), sd=("density", "std"),
                         target=("target", "first"), mean_gap=("gap", "mean"), max_gap=("gap", "max")).reset_index()
    report["sd"] = report["sd"].fillna(0.0)
    stderr = {name: estimate.stderr for name, estimate in (targets or {}).items()}
    report["target_stderr"] = report["graph"].map(stderr).fillna(0.0)
    return report[REPORT_COLUMNS]


def gap_improvements(frame: pd.DataFrame, graph: str, small: int, large: int) -> int:
    """Number of trials whose gap at order `large` is below the gap at order `small`."""
    rows = frame[frame["graph"] == graph].pivot(index="trial", columns="n", values="gap")
    return int((rows[large] < rows[small]).sum())


def analyze_convergence(report: pd.DataFrame) -> Dict[str, Any]:
    """
    Check that mean gaps shrink along the schedule, per graph.

    Args:
        report (pd.DataFrame): Output of convergence_report.

    Returns:
        Dict[str, Any]: Per-graph gap sequences and whether each is nonincreasing.
    """
    analysis: Dict[str, Any] = {}
    for graph, rows in report.groupby("graph", sort=False):
        gaps = rows.sort_values("n")["mean_gap"].to_numpy()
        shrinking = bool(np.all(np.diff(gaps) <= 0))
        if not shrinking:
            logger.info("Mean gaps of %s do not shrink monotonically: %s", graph, gaps.tolist())
        analysis[graph] = {"orders": rows.sort_values("n")["n"].tolist(), "mean_gaps": gaps.tolist(),
                           "shrinking": shrinking}
    return analysis


def get_convergence_summary(report: pd.DataFrame) -> str:
    """
    Human-readable summary of a convergence report.

    Args:
        report (pd.DataFrame): Output of convergence_report.

    Returns:
        str: Summary in markdown format.
    """
    if report.empty:
        return "No convergence data available."
    lines = ["## Convergence Summary", ""]
    for graph, info in analyze_convergence(report).items():
        gaps = ", ".join(f"n={n}: {gap:.3g}" for n, gap in zip(info["orders"], info["mean_gaps"]))
        status = "shrinking" if info["shrinking"] else "not monotone"
        lines.append(f"- **{graph}**: {gaps} ({status})")
    return "\n".join(lines) + "\n"
