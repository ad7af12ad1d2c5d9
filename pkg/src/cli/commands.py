"""
Command-line surface: heatmaps, densities, sampling, distances, convergence runs,
constraint evaluation and the forced-property battery.

Exit codes: 0 success, 1 usage or input error, 2 verification failure, 3 inconclusive only.
"""
import argparse
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError

from src.battery.runner import verify_forced_properties
from src.constraints.evaluator import eval_constraints
from src.constraints.parser import load_constraints
from src.density.engine import MONTE_CARLO, QUADRATURE, density
from src.density.quadrature import MAX_ORDER as MAX_QUADRATURE_ORDER
from src.exceptions import GraphonLabError
from src.graph.builder import named_graph
from src.graph.graph_spec import GraphSpec
from src.graphon.core import Graphon
from src.graphon.hypercube import HypercubeGraphon
from src.graphon.partitioned import PartitionedGraphon, parse_pair
from src.graphon.spec_file import load_graphon
from src.monitoring.convergence import convergence_trials, get_convergence_summary, summarize_trials, target_densities
from src.sampler.wrandom import empirical_density, sample
from src.state.models import CheckReport, Verdict, summarize_verdicts
from src.state.run_config import DENSITY_METHODS, OUTPUT_FORMATS, LabSettings, RunConfig
from src.tools.file_utils import (
    ensure_directory_exists,
    format_table,
    list_files,
    write_file,
    write_json_file,
    write_table,
)
from src.tools.heatmap import write_heatmap
from src.typical.space import class_counts, sandwich_frame, sandwich_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
EXIT_INCONCLUSIVE = 3

_SUFFIX = {"json": "json", "csv": "csv", "table": "txt"}
CONSTRAINT_SUFFIX = ".gc"


# -- helpers ---------------------------------------------------------------------------------


def exit_code(reports: Sequence[CheckReport]) -> int:
    """2 if anything failed, 3 if something is inconclusive, 0 otherwise."""
    verdicts = {r.verdict for r in reports}
    if Verdict.FAIL in verdicts:
        return EXIT_FAILED
    if Verdict.INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def report_frame(reports: Sequence[CheckReport]) -> pd.DataFrame:
    """One row per report: name, verdict, both sides, delta, sigma, tolerance."""
    rows = [{"name": r.name, "verdict": r.verdict.value, "lhs": r.lhs.value, "lhs_stderr": r.lhs.stderr,
             "rhs": r.rhs.value, "rhs_stderr": r.rhs.stderr, "delta": r.delta,
             "sigma": r.details.get("sigma", 0.0), "tolerance": r.tolerance} for r in reports]
    return pd.DataFrame(rows, columns=["name", "verdict", "lhs", "lhs_stderr", "rhs", "rhs_stderr", "delta",
                                       "sigma", "tolerance"])


def write_reports(config: RunConfig, stem: str, reports: Sequence[CheckReport]) -> None:
    """JSON array of the reports plus a text table."""
    ensure_directory_exists(config.out)
    write_json_file(os.path.join(config.out, f"{stem}.json"), [r.to_dict() for r in reports])
    write_file(os.path.join(config.out, f"{stem}.txt"), format_table(report_frame(reports)))
    logger.info("%s: %s", stem, summarize_verdicts(list(reports)))


def output_path(config: RunConfig, stem: str) -> str:
    return os.path.join(config.out, f"{stem}.{_SUFFIX[config.format]}")


def load_config_graphon(config: RunConfig) -> Graphon:
    """The graphon named by the configuration, with the requested kernel corrupted if any."""
    graphon = load_graphon(config.graphon, config.depth)
    if config.mutate:
        if not isinstance(graphon, PartitionedGraphon):
            raise GraphonLabError(f"--mutate needs a partitioned graphon, got {graphon.name}")
        graphon = graphon.mutated(parse_pair(config.mutate))
    return graphon


def constraint_files(paths: Sequence[str]) -> List[str]:
    """Expand directories into the constraint files (*.gc) they contain."""
    files = []
    for path in paths:
        files.extend(list_files(path, [CONSTRAINT_SUFFIX]) if os.path.isdir(path) else [path])
    return files


def load_graphs(config: RunConfig, default: Sequence[str] = ("K2",)) -> List[GraphSpec]:
    """Graphs named on the command line: vocabulary names or files of graph definitions."""
    graphs = []
    for entry in config.graphs or list(default):
        if os.path.isfile(entry):
            graphs.extend(load_constraints(entry).graphs.values())
        else:
            try:
                graphs.append(named_graph(entry))
            except KeyError:
                raise GraphonLabError(f"unknown graph '{entry}' (not a file and not in the vocabulary)") from None
    return graphs


# -- commands --------------------------------------------------------------------------------


def cmd_heatmap(config: RunConfig) -> int:
    graphon = load_config_graphon(config)
    path = os.path.join(config.out, config.image)
    preview = os.path.splitext(path)[0] + ".preview.png" if config.preview else None
    write_heatmap(graphon, path, config.resolution, preview)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    """Run the battery; exit 0 iff every item passes."""
    graphon = load_config_graphon(config)
    if not isinstance(graphon, HypercubeGraphon):
        raise GraphonLabError(f"the battery runs on the hypercubical graphon, got {graphon.name}")
    reports = verify_forced_properties(graphon, config.budget, config.tol, config.seed, items=config.items,
                                       threads=config.threads, quiet=config.quiet)
    write_reports(config, "battery", reports)
    return exit_code(reports)


def cmd_evaluate(config: RunConfig) -> int:
    """Evaluate every constraint of the given files."""
    if not config.constraints:
        raise GraphonLabError("evaluate needs at least one --constraints file")
    graphon = load_config_graphon(config)
    constraints = [c for path in constraint_files(config.constraints) for c in load_constraints(path).constraints]
    method = MONTE_CARLO if config.method == "auto" else config.method
    reports = eval_constraints(constraints, graphon, config.budget, config.tol, config.seed, method=method,
                               threads=config.threads)
    write_reports(config, "constraints", reports)
    return exit_code(reports)


def cmd_density(config: RunConfig) -> int:
    graphon = load_config_graphon(config)
    rows = []
    for i, graph in enumerate(load_graphs(config)):
        method = config.method
        if method == "auto":
            method = QUADRATURE if graph.n <= MAX_QUADRATURE_ORDER else MONTE_CARLO
        estimate = density(graph, graphon, config.budget, config.seed + i, method=method, threads=config.threads)
        rows.append({"graph": graph.describe(), **estimate.to_dict()})
    ensure_directory_exists(config.out)
    write_table(output_path(config, "densities"), pd.DataFrame(rows), config.format)
    return EXIT_OK


def cmd_sample(config: RunConfig) -> int:
    graphon = load_config_graphon(config)
    graph = sample(graphon, config.n, config.seed, config.threads)
    ensure_directory_exists(config.out)
    graph.write_edgelist(os.path.join(config.out, "graph.edgelist"))
    rows = []
    for i, h in enumerate(load_graphs(config)):
        estimate = empirical_density(graph, h, config.budget, config.seed + i, config.threads)
        rows.append({"graph": h.describe(), **estimate.to_dict()})
    summary = {"graphon": graphon.name, "n": graph.n, "seed": config.seed, "edges": graph.edge_count,
               "edge_density": graph.edge_density, "densities": rows}
    write_json_file(os.path.join(config.out, "sample.json"), summary)
    return EXIT_OK


def cmd_distances(config: RunConfig) -> int:
    """Sandwich rows for random D pairs; exit 2 on any violated inequality."""
    graphon = load_config_graphon(config)
    if not isinstance(graphon, HypercubeGraphon):
        raise GraphonLabError("distances compare vertices of D of the hypercubical graphon")
    rows = sandwich_table(graphon, config.pairs, config.budget, config.seed, config.depth, config.threads,
                          config.quiet)
    frame = sandwich_frame(rows)
    ensure_directory_exists(config.out)
    write_table(os.path.join(config.out, "distances.csv"), frame, "csv")
    if config.format != "csv":
        write_table(output_path(config, "distances"), frame, config.format)
    return EXIT_OK if all(row.holds for row in rows) else EXIT_FAILED


def cmd_convergence(config: RunConfig) -> int:
    graphon = load_config_graphon(config)
    graphs = load_graphs(config, default=("K2", "K3"))
    targets = target_densities(graphon, graphs, config.budget, config.seed, config.threads)
    trials = convergence_trials(graphon, graphs, config.schedule, config.trials, config.seed, config.budget,
                                config.threads, config.quiet, targets)
    report = summarize_trials(trials, targets)
    ensure_directory_exists(config.out)
    write_table(os.path.join(config.out, "convergence_trials.csv"), trials, "csv")
    write_table(output_path(config, "convergence"), report, config.format)
    write_file(os.path.join(config.out, "convergence.md"), get_convergence_summary(report))
    return EXIT_OK


def cmd_classes(config: RunConfig) -> int:
    """Greedy neighbourhood-class counts for the requested radii."""
    graphon = load_config_graphon(config)
    counts = class_counts(graphon, config.eps, config.pairs, config.seed)
    frame = pd.DataFrame([{"eps": eps, "classes": count, "samples": config.pairs} for eps, count in counts.items()])
    ensure_directory_exists(config.out)
    write_table(output_path(config, "classes"), frame, config.format)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "heatmap": cmd_heatmap,
    "verify": cmd_verify,
    "evaluate": cmd_evaluate,
    "density": cmd_density,
    "sample": cmd_sample,
    "distances": cmd_distances,
    "convergence": cmd_convergence,
    "classes": cmd_classes,
}


# -- argument parsing ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graphon", default="hypercubical", help="builtin name or graphon spec file")
    common.add_argument("--constraints", nargs="*", default=[], help="constraint files")
    common.add_argument("--graphs", nargs="*", default=[], help="graph names or graph definition files")
    common.add_argument("--seed", type=int, help="root seed (required by stochastic commands)")
    common.add_argument("--budget", type=int, default=1_000_000, help="Monte Carlo samples")
    common.add_argument("--tol", type=float, help="absolute tolerance")
    common.add_argument("--depth", type=int, help="truncation depth L")
    common.add_argument("--out", default="reports", help="output directory")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default="json", help="report format")
    common.add_argument("--resolution", type=int, default=256, help="heatmap pixels per side")
    common.add_argument("--threads", type=int, help="worker cap (default GRAPHONLAB_THREADS)")
    common.add_argument("--quiet", action="store_true", help="no progress bars")
    common.add_argument("--method", choices=DENSITY_METHODS, default="auto", help="density method")
    common.add_argument("--mutate", help="corrupt one kernel, e.g. A1xB1 (negative control)")

    parser = argparse.ArgumentParser(prog="graphonlab", description="Numerical lab for partitioned graphons.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("heatmap", parents=[common], help="grayscale raster of a graphon").add_argument(
        "--image", default="heatmap.png", help="file name inside --out (.png or .pgm)")
    sub.choices["heatmap"].add_argument("--preview", action="store_true", help="annotated matplotlib preview")
    sub.add_parser("verify", parents=[common], help="forced-property battery").add_argument(
        "--items", nargs="*", help="battery items to run (default all)")
    sub.add_parser("evaluate", parents=[common], help="evaluate constraint files")
    sub.add_parser("density", parents=[common], help="subgraph densities")
    sub.add_parser("sample", parents=[common], help="W-random graph").add_argument(
        "-n", type=int, default=500, help="order of the graph")
    sub.add_parser("distances", parents=[common], help="distance sandwich on D pairs").add_argument(
        "--pairs", type=int, default=50, help="number of pairs")
    conv = sub.add_parser("convergence", parents=[common], help="d(H, G_n) against d(H, W)")
    conv.add_argument("--schedule", type=int, nargs="+", default=[50, 200, 800], help="graph orders")
    conv.add_argument("--trials", type=int, default=20, help="trials per order")
    classes = sub.add_parser("classes", parents=[common], help="neighbourhood-class counts")
    classes.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.1, 0.05], help="radii")
    classes.add_argument("--pairs", type=int, default=500, help="sampled vertices")
    return parser


def config_from_args(args: argparse.Namespace, settings: LabSettings) -> RunConfig:
    values = {key: value for key, value in vars(args).items() if value is not None}
    values.setdefault("depth", settings.depth)
    values.setdefault("threads", settings.threads)
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one command and map errors to exit codes.

    Args:
        argv (Optional[Sequence[str]]): Arguments without the program name.

    Returns:
        int: The exit code.
    """
    load_dotenv()
    settings = LabSettings.from_env()
    logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO),
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = config_from_args(args, settings)
        config = config.model_copy(update={"quiet": config.quiet or not sys.stderr.isatty()})
        logger.info("Running %s on %s (seed=%s)", config.command, config.graphon, config.seed)
        return COMMANDS[config.command](config)
    except ValidationError as exc:
        logger.error("Invalid configuration: %s", exc)
    except (GraphonLabError, ValueError, KeyError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
    return EXIT_USAGE
