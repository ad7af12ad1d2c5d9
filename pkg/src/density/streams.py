"""
Counter-based random streams.

Every stream is a Philox generator keyed by a SeedSequence built from the root seed and
a tuple of integer keys (chunk index, worker index, row index, ...), so any piece of a
computation can be reproduced without replaying the ones before it.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from src.state.run_config import LabSettings

logger = logging.getLogger(__name__)

T = TypeVar("T")

CHUNK_SIZE = 1 << 16


def generator(seed: int, *keys: int) -> np.random.Generator:
    """
    Create the generator for one stream.

    Args:
        seed (int): Root seed.
        *keys (int): Stream coordinates.

    Returns:
        np.random.Generator: A Philox-backed generator.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))


def lattice_uniform(rng: np.random.Generator, size: int, precision: int = 53) -> np.ndarray:
    """Uniform samples from the lattice {k / 2^P : 0 <= k < 2^P}."""
    ints = rng.integers(0, 1 << precision, size=size, dtype=np.int64)
    return ints / float(1 << precision)


def chunk_sizes(budget: int, chunk: int = CHUNK_SIZE) -> List[int]:
    """Split a sample budget into fixed-size chunks (the last one may be shorter)."""
    if budget <= 0:
        return []
    full, rest = divmod(budget, chunk)
    return [chunk] * full + ([rest] if rest else [])


def worker_count(threads: Optional[int] = None) -> int:
    if threads is not None:
        return max(1, threads)
    return LabSettings.from_env().threads


def map_chunks(fn: Callable[[int, int], T], sizes: Sequence[int], threads: Optional[int] = None) -> List[T]:
    """
    Run fn(chunk_index, chunk_size) over all chunks, possibly on a thread pool.

    Results come back in chunk order, so the merged estimate does not depend on the
    number of workers.
    """
    workers = min(worker_count(threads), max(1, len(sizes)))
    if workers == 1:
        return [fn(i, size) for i, size in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda args: fn(*args), enumerate(sizes)))


def concat(parts: Iterable[np.ndarray]) -> np.ndarray:
    arrays = [np.asarray(p) for p in parts]
    return np.concatenate(arrays) if arrays else np.zeros(0)


def derive_seed(seed: int, *keys: int) -> int:
    """An independent 63-bit seed for a sub-computation identified by keys."""
    state = np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 31 | int(state[1]) >> 1
