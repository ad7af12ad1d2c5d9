"""
Evaluation of constraints on graphons and the pass / fail / inconclusive verdict rule.
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.constraints.ast import Atom, Const, Constraint, DensityExpr, Product, Ratio, Sum, check_compatible
from src.density.engine import DEFAULT_BUDGET, MONTE_CARLO, density, rooted_density, sample_roots
from src.density.streams import derive_seed
from src.graphon.core import Graphon
from src.state.models import CheckReport, DensityEstimate, EstimatorKind, RootAssignment, Verdict

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 5e-3
EXACT_TOLERANCE = 1e-9
PANEL_SIZE = 64
INCONCLUSIVE_SIGMAS = 4.0
# Smallest Monte Carlo budget spent on one root tuple of the panel.
MIN_ROOT_BUDGET = 4096

Gradient = Dict[str, float]


def verdict_for(delta: float, tolerance: float, sigma: float) -> Verdict:
    """Inconclusive when |delta| is within 4 sigma of the tolerance, else pass iff |delta| < tolerance."""
    if sigma > 0 and abs(delta - tolerance) <= INCONCLUSIVE_SIGMAS * sigma:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS if delta < tolerance else Verdict.FAIL


def make_report(name: str, lhs: DensityEstimate, rhs: DensityEstimate, tolerance: float,
                sigma: Optional[float] = None, details: Optional[dict] = None) -> CheckReport:
    """
    Compare two estimates.

    Args:
        name (str): Report name.
        lhs (DensityEstimate): Left-hand side.
        rhs (DensityEstimate): Right-hand side.
        tolerance (float): Accepted |lhs - rhs|.
        sigma (Optional[float]): Standard error of the difference; independent sides by default.
        details (Optional[dict]): Extra diagnostics.

    Returns:
        CheckReport: The report with its verdict.
    """
    if sigma is None:
        sigma = math.hypot(lhs.stderr, rhs.stderr)
    delta = abs(lhs.value - rhs.value)
    details = dict(details or {})
    details.setdefault("sigma", sigma)
    return CheckReport(name=name, lhs=lhs, rhs=rhs, delta=delta, tolerance=tolerance,
                       verdict=verdict_for(delta, tolerance, sigma), details=details)


def propagate(expr: DensityExpr, atoms: Dict[str, DensityEstimate]) -> Tuple[float, Gradient]:
    """Value of an expression and its gradient with respect to the atom values."""
    if isinstance(expr, Const):
        return float(expr.value), {}
    if isinstance(expr, Atom):
        return atoms[expr.name].value, {expr.name: 1.0}
    if isinstance(expr, Sum):
        value, grad = 0.0, {}
        for term in expr.terms:
            v, g = propagate(term, atoms)
            value += v
            _accumulate(grad, g, 1.0)
        return value, grad
    if isinstance(expr, Product):
        parts = [propagate(f, atoms) for f in expr.factors]
        value = math.prod(v for v, _ in parts)
        grad: Gradient = {}
        for i, (_, g) in enumerate(parts):
            others = math.prod(v for j, (v, _) in enumerate(parts) if j != i)
            _accumulate(grad, g, others)
        return value, grad
    if isinstance(expr, Ratio):
        a, ga = propagate(expr.numerator, atoms)
        b, gb = propagate(expr.denominator, atoms)
        if b == 0.0:
            raise ZeroDivisionError("denominator of a formal fraction evaluated to zero")
        grad = {}
        _accumulate(grad, ga, 1.0 / b)
        _accumulate(grad, gb, -a / (b * b))
        return a / b, grad
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _accumulate(target: Gradient, source: Gradient, scale: float) -> None:
    for key, value in source.items():
        target[key] = target.get(key, 0.0) + scale * value


def _spread(grad: Gradient, atoms: Dict[str, DensityEstimate]) -> float:
    return math.sqrt(sum((g * atoms[k].stderr) ** 2 for k, g in grad.items()))


def _side_estimate(value: float, grad: Gradient, atoms: Dict[str, DensityEstimate]) -> DensityEstimate:
    used = [atoms[k] for k in grad]
    stderr = _spread(grad, atoms)
    samples = sum(e.samples for e in used)
    if all(e.kind == EstimatorKind.QUADRATURE for e in used):
        return DensityEstimate.exact(value, cells=max(samples, 1))
    return DensityEstimate(value=value, stderr=stderr, samples=samples, kind=EstimatorKind.MONTE_CARLO)


def _atom_graphs(constraint: Constraint) -> Dict[str, Atom]:
    return {a.name: a for a in sorted(constraint.atoms(), key=lambda a: a.name)}


def _compare(constraint: Constraint, atoms: Dict[str, DensityEstimate]) -> Tuple[DensityEstimate, DensityEstimate, float]:
    lv, lg = propagate(constraint.lhs, atoms)
    rv, rg = propagate(constraint.rhs, atoms)
    diff: Gradient = dict(lg)
    _accumulate(diff, rg, -1.0)
    return _side_estimate(lv, lg, atoms), _side_estimate(rv, rg, atoms), _spread(diff, atoms)


def eval_constraint(constraint: Constraint, graphon: Graphon, budget: int = DEFAULT_BUDGET,
                    tol: Optional[float] = None, seed: int = 0, method: str = MONTE_CARLO,
                    panel_size: int = PANEL_SIZE, threads: Optional[int] = None) -> CheckReport:
    """
    Evaluate both sides of a constraint on a graphon.

    Fractions are cross-multiplied first. Rooted constraints are checked pointwise on a
    panel of mu-distributed root tuples and in expectation over that panel.

    Args:
        constraint (Constraint): The constraint.
        graphon (Graphon): The graphon.
        budget (int): Monte Carlo samples per density (per panel, for rooted constraints).
        tol (Optional[float]): Tolerance; 5e-3 for sampled and 1e-9 for exact evaluations if omitted.
        seed (int): Root seed.
        method (str): "monte-carlo" or "quadrature" for unrooted densities.
        panel_size (int): Root tuples in the rooted panel.
        threads (Optional[int]): Worker cap.

    Returns:
        CheckReport: Verdict and diagnostics.
    """
    check_compatible(constraint)
    target = constraint.cross_multiplied()
    graphs = _atom_graphs(target)
    if target.is_rooted:
        return _eval_rooted(constraint, target, graphs, graphon, budget, tol, seed, panel_size, threads)
    atoms = {
        name: density(atom.graph, graphon, budget, derive_seed(seed, index), method=method, threads=threads)
        for index, (name, atom) in enumerate(graphs.items())
    }
    lhs, rhs, sigma = _compare(target, atoms)
    exact = all(e.kind == EstimatorKind.QUADRATURE for e in atoms.values())
    tolerance = tol if tol is not None else (EXACT_TOLERANCE if exact else DEFAULT_TOLERANCE)
    details = {"atoms": {name: e.to_dict() for name, e in atoms.items()}}
    if target is not constraint:
        details["cross_multiplied"] = True
    report = make_report(constraint.name, lhs, rhs, tolerance, sigma, details)
    logger.info("%s: |delta|=%.3g tol=%.3g -> %s", constraint.name, report.delta, tolerance, report.verdict.value)
    return report


def _eval_rooted(constraint: Constraint, target: Constraint, graphs: Dict[str, Atom], graphon: Graphon,
                 budget: int, tol: Optional[float], seed: int, panel_size: int,
                 threads: Optional[int]) -> CheckReport:
    tolerance = tol if tol is not None else DEFAULT_TOLERANCE
    h0 = next(iter(graphs.values())).graph.root_graph()
    panel: List[RootAssignment] = sample_roots(h0, graphon, panel_size, derive_seed(seed, 0))
    per_root = max(int(budget) // max(len(panel), 1), MIN_ROOT_BUDGET)
    verdicts: List[Verdict] = []
    deltas, lhs_values, rhs_values, worst = [], [], [], 0.0
    for p, roots in enumerate(panel):
        atoms = {
            name: rooted_density(atom.graph, graphon, roots.coords, per_root,
                                 derive_seed(seed, 1 + index), threads=threads, stream=p)
            for index, (name, atom) in enumerate(graphs.items())
        }
        lhs, rhs, sigma = _compare(target, atoms)
        delta = lhs.value - rhs.value
        verdicts.append(verdict_for(abs(delta), tolerance, sigma))
        deltas.append(delta)
        lhs_values.append(lhs.value)
        rhs_values.append(rhs.value)
        worst = max(worst, abs(delta))
    deltas_arr = np.asarray(deltas)
    sigma_mean = float(deltas_arr.std(ddof=1) / math.sqrt(deltas_arr.size)) if deltas_arr.size > 1 else 0.0
    lhs_est = DensityEstimate.from_samples(lhs_values)
    rhs_est = DensityEstimate.from_samples(rhs_values)
    expectation = verdict_for(abs(float(deltas_arr.mean())), tolerance, sigma_mean)
    counts = {v.value: verdicts.count(v) for v in Verdict}
    if expectation == Verdict.FAIL or counts[Verdict.FAIL.value]:
        verdict = Verdict.FAIL
    elif expectation == Verdict.INCONCLUSIVE or counts[Verdict.INCONCLUSIVE.value]:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    details = {
        "panel_size": len(panel),
        "panel": counts,
        "worst_delta": worst,
        "expectation_delta": float(deltas_arr.mean()),
        "expectation_sigma": sigma_mean,
        "expectation_verdict": expectation.value,
        "budget_per_root": per_root,
    }
    logger.info("%s: rooted panel %s, expectation %s -> %s", constraint.name, counts, expectation.value, verdict.value)
    return CheckReport(name=constraint.name, lhs=lhs_est, rhs=rhs_est, delta=abs(float(deltas_arr.mean())),
                       tolerance=tolerance, verdict=verdict, details=details)


def eval_constraints(constraints: List[Constraint], graphon: Graphon, budget: int = DEFAULT_BUDGET,
                     tol: Optional[float] = None, seed: int = 0, method: str = MONTE_CARLO,
                     threads: Optional[int] = None) -> List[CheckReport]:
    """Evaluate a list of constraints, each with its own derived seed, sorted by name."""
    reports = [eval_constraint(c, graphon, budget, tol, derive_seed(seed, i), method=method, threads=threads)
               for i, c in enumerate(constraints)]
    return sorted(reports, key=lambda r: r.name)
