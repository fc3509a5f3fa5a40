"""
📡 Wiretap LBB - Reproducible Random Streams
============================================

Counter-based substreams. A consumer owns a stream id; the generator for
counters (c₁, c₂, …) under that stream is

    Generator(Philox(SeedSequence(master_seed, spawn_key=(stream_id, c₁, c₂, …))))

SeedSequence hashes the entropy and the spawn key into Philox's 128-bit key,
so distinct (master_seed, stream_id, counters) tuples give distinct streams.
Monte Carlo trials are grouped into fixed blocks of ``MC_BLOCK_SIZE``; trial i
lives in block i // MC_BLOCK_SIZE, and the block size never depends on the
worker count. Reductions are plain sums, so any number of workers gives
bit-identical tallies.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Tuple, TypeVar

import numpy as np

from src.utils import config
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

T = TypeVar("T")

_UINT64_LIMIT = 1 << 64


@dataclass(frozen=True)
class RngSpec:
    master_seed: int
    stream_id: int

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            value = getattr(self, name)
            if int(value) != value or not 0 <= value < _UINT64_LIMIT:
                raise DomainError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def seed_sequence(self, *counters: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(int(self.master_seed),
                                      spawn_key=(int(self.stream_id),) + tuple(int(c) for c in counters))

    def generator(self, *counters: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed_sequence(*counters)))

    def with_stream(self, stream_id: int) -> "RngSpec":
        return RngSpec(self.master_seed, stream_id)


def block_layout(n_trials: int, block_size: int = config.MC_BLOCK_SIZE) -> List[Tuple[int, int]]:
    """(block_index, trials_in_block) pairs covering ``n_trials`` trials."""
    if n_trials < 1:
        raise DomainError(f"n_trials must be >= 1, got {n_trials}")
    blocks = []
    start = 0
    index = 0
    while start < n_trials:
        size = min(block_size, n_trials - start)
        blocks.append((index, size))
        start += size
        index += 1
    return blocks


def map_ordered(fn: Callable[..., T], items: List, workers: int = 1) -> List[T]:
    """Apply ``fn`` to every item, in parallel when workers > 1; results keep input order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(*item) if isinstance(item, tuple) else fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *item) if isinstance(item, tuple) else pool.submit(fn, item)
                   for item in items]
        return [future.result() for future in futures]
