"""Seed-stream derivation.

A 64-bit master seed is expanded into independent streams with numpy's
``SeedSequence``: the stream for ``(tag, i, j, ...)`` uses the master seed
as entropy and the tuple as ``spawn_key``. Streams therefore depend only on
their address, never on scheduling order.
"""

from __future__ import annotations

import numpy as np

# operation tags
POINTS = 1
CONFIG = 2
GRAPH_TRIAL = 3
LATTICE = 4
ASYNC_ORDER = 5

MASK64 = (1 << 64) - 1


def stream(master_seed: int, tag: int, *indices: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(master_seed) & MASK64, spawn_key=(tag, *map(int, indices)))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(master_seed: int, tag: int, *indices: int) -> int:
    """A child 64-bit seed, for handing a sub-task its own master seed."""
    ss = np.random.SeedSequence(entropy=int(master_seed) & MASK64, spawn_key=(tag, *map(int, indices)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
