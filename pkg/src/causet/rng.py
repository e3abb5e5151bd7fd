"""Deterministic replica RNG streams.

Every randomized operation takes an explicit numpy Generator.  Replica
streams are derived from (master seed, replica index) via SeedSequence
spawn keys, so results do not depend on worker count or execution order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np


def replica_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for one replica; fixed by (seed, index) alone."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def replica_rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [replica_rng(seed, i) for i in range(count)]


def thread_count() -> int:
    """Worker cap from CAUSET_THREADS; defaults to 1 (sequential)."""
    raw = os.environ.get("CAUSET_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def map_replicas(fn: Callable[[np.random.Generator, int], object], replicas: int,
                 seed: int) -> list:
    """Run fn(rng_i, i) for each replica; results ordered by replica index.

    Parallelism (if any) is observationally transparent: stream i is the
    same no matter how many workers execute the batch.
    """
    rngs = replica_rngs(seed, replicas)
    workers = thread_count()
    if workers == 1 or replicas == 1:
        return [fn(rngs[i], i) for i in range(replicas)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, rngs, range(replicas)))


def summarize(values: Sequence[float]) -> tuple[float, float, float]:
    """(mean, sample std, standard error of the mean) over replicas."""
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, 0.0, 0.0
    std = float(arr.std(ddof=1))
    return mean, std, std / float(np.sqrt(arr.size))
