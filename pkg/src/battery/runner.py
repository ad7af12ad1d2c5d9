"""
Runs the forced-property battery concurrently and collects its reports.
"""
import logging
import zlib
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Iterable, List, Optional

from tqdm import tqdm

from src.battery.checks import CHECKS, BatteryContext
from src.density.engine import DEFAULT_BUDGET
from src.density.streams import derive_seed, worker_count
from src.graphon.hypercube import HypercubeGraphon
from src.state.models import CheckReport

logger = logging.getLogger(__name__)


def item_seed(seed: int, item: str) -> int:
    """Seed of one battery item, independent of which other items run."""
    return derive_seed(seed, zlib.crc32(item.encode("utf-8")))


def select_items(items: Optional[Iterable[str]] = None) -> List[str]:
    """
    Resolve an item selection; None selects the whole battery.

    Raises:
        KeyError: If an item name is unknown.
    """
    if items is None:
        return list(CHECKS)
    selected = list(dict.fromkeys(items))
    unknown = [name for name in selected if name not in CHECKS]
    if unknown:
        raise KeyError(f"unknown battery items: {', '.join(unknown)} (known: {', '.join(CHECKS)})")
    return selected


def verify_forced_properties(g: HypercubeGraphon, budget: int = DEFAULT_BUDGET, tol: Optional[float] = None,
                             seed: int = 0, items: Optional[Iterable[str]] = None, threads: Optional[int] = None,
                             quiet: bool = True) -> List[CheckReport]:
    """
    Run the forced-property battery on a hypercubical graphon.

    Args:
        g (HypercubeGraphon): The graphon, possibly with mutated kernels.
        budget (int): Monte Carlo samples per sampled check (capped per check).
        tol (Optional[float]): Tolerance of the sampled checks; exact checks always use 1e-9.
        seed (int): Root seed; each item derives its own.
        items (Optional[Iterable[str]]): Items to run, all by default.
        threads (Optional[int]): Worker cap.
        quiet (bool): Hide the progress bar.

    Returns:
        List[CheckReport]: Reports of every item, sorted by name.
    """
    selected = select_items(items)
    if not selected:
        logger.info("Empty battery selection")
        return []
    logger.info("Running %d battery items on %s (budget=%d, seed=%d)", len(selected), g.name, budget, seed)
    reports: List[CheckReport] = []
    with ThreadPoolExecutor(max_workers=min(worker_count(threads), len(selected))) as pool:
        futures = {
            pool.submit(CHECKS[name], BatteryContext(g, budget, item_seed(seed, name), tol)): name
            for name in selected
        }
        for future in tqdm(as_completed(futures), total=len(futures), desc="battery", disable=quiet):
            name = futures[future]
            produced = future.result()
            failed = [r.name for r in produced if not r.passed]
            if failed:
                logger.warning("Battery item %s: %s not passing", name, ", ".join(failed))
            else:
                logger.debug("Battery item %s passed (%d reports)", name, len(produced))
            reports.extend(produced)
    return sorted(reports, key=lambda r: r.name)
