"""
Random Stream Module
Keyed, splittable random streams for reproducible parallel simulation

Every replication gets its own numpy Generator derived from
(master_seed, cell key, replication index) through SeedSequence spawn keys,
so results never depend on scheduling or the number of worker processes.
Normal draws use numpy's PCG64 bit generator with the ziggurat
standard_normal sampler.
"""

from typing import Any, Tuple

import numpy as np

from utils.helpers import stable_hash


def cell_key(*parts: Any) -> int:
    """
    Stable integer key of a Monte Carlo cell

    Args:
        *parts: Values identifying the cell (regime, parameter, delta, n, beta)

    Returns:
        Non-negative 64-bit integer
    """
    return stable_hash(*parts)


def replication_stream(master_seed: int, key: int, replication: int) -> np.random.Generator:
    """
    Independent generator for one replication of one cell

    Args:
        master_seed: Campaign seed (unsigned 64-bit)
        key: Cell key from cell_key
        replication: Replication index

    Returns:
        numpy Generator backed by PCG64
    """
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(key), int(replication)))
    return np.random.Generator(np.random.PCG64(seq))


def split(master_seed: int, key: int, count: int) -> Tuple[np.random.Generator, ...]:
    """Generators for replications 0..count-1 of one cell"""
    return tuple(replication_stream(master_seed, key, r) for r in range(count))
