"""Deterministic random-number streams for reproducible simulations.

All stochastic code in this package draws from Philox counter-based
generators keyed by an integer seed plus a derivation path.  The same
``(seed, path)`` always yields the same stream, independent of how many
other streams were created before it, so parallel trials and per-track
simulations are bit-reproducible.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _path_key(item) -> int:
    """Map a path element to a stable unsigned integer."""
    if isinstance(item, (int, np.integer)):
        return int(item) & 0xFFFFFFFF
    digest = hashlib.sha256(str(item).encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "little")


def stream(seed: int, *path) -> np.random.Generator:
    """Return a Philox generator derived from ``seed`` and a derivation path.

    Path elements may be integers or strings (strings are hashed).  Streams
    with different paths are statistically independent.
    """
    spawn_key = tuple(_path_key(p) for p in path)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(ss))
