"""Counter-based random streams.

Every random draw in a run flows from the master seed through a purpose
tag plus integer path (generation, agent id, episode index, ...). Streams
never depend on execution order, so concurrent evaluation and resuming
from a checkpoint reproduce a straight-through run byte for byte.
"""

from __future__ import annotations

import numpy as np

TAG_INIT = 1
TAG_EPISODE = 2
TAG_VARIATION = 3
TAG_VALIDATION = 4
TAG_TEST = 5
TAG_PROBE = 6


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Generator for one (seed, path) stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(path)))


def seed_for(seed: int, *path: int) -> int:
    """A plain integer sub-seed for the same stream, suitable for logs."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, np.uint64)[0])
