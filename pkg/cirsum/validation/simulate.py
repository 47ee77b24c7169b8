"""
Exact Monte Carlo sampling of the weighted sum
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..error_handler import DomainError
from ..mixture import SumModel
from ..transition import sample_transitions

SHARD_SIZE = 1 << 16


def _shard(m: SumModel, size: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    first = sample_transitions(m.derived1, size, rng)
    second = sample_transitions(m.derived2, size, rng)
    return first + second


def simulate_sum(m: SumModel, n: int, seed: int = 1, workers: int = 1) -> np.ndarray:
    """
    n independent exact draws of S.

    Draws are produced in fixed-size shards, shard i using the i-th child of
    SeedSequence(seed), so the sample does not depend on the worker count.

    Args:
        m: Sum model
        n: Number of draws (>= 1)
        seed: Master seed
        workers: Threads used across shards

    Returns:
        Array of n draws
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    n_shards = math.ceil(n / SHARD_SIZE)
    children = np.random.SeedSequence(seed).spawn(n_shards)
    sizes = [min(SHARD_SIZE, n - i * SHARD_SIZE) for i in range(n_shards)]

    if workers <= 1 or n_shards == 1:
        parts = [_shard(m, size, child) for size, child in zip(sizes, children)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda args: _shard(m, *args), zip(sizes, children)))
    return np.concatenate(parts)
