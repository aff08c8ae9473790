"""Deterministic random-stream derivation.

Every stochastic routine in the package receives its entropy through
``derive_rng(master_seed, *path)``.  The path is a tuple of small ints or
short strings naming the consumer ("walkers", replication index, ...).
Path elements are hashed into the Philox key, so

* the same (master_seed, path) always yields the same stream,
* distinct paths yield independent streams,
* parallel workers can be handed streams by index with no shared state.

Philox is a counter-based generator, which is what makes the per-task
derivation cheap and collision-free in practice.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_rng", "derive_seed_sequence"]


def _encode(token: int | str) -> int:
    """Map a path token to a stable 64-bit integer."""
    if isinstance(token, (int, np.integer)):
        if token < 0:
            raise ValueError("stream path integers must be non-negative")
        return int(token)
    digest = hashlib.sha256(token.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed_sequence(master_seed: int, *path: int | str) -> np.random.SeedSequence:
    """SeedSequence for stream ``path`` under ``master_seed``."""
    entropy = [_encode(master_seed)] + [_encode(p) for p in path]
    return np.random.SeedSequence(entropy)


def derive_rng(master_seed: int, *path: int | str) -> np.random.Generator:
    """Counter-based generator for stream ``path`` under ``master_seed``."""
    return np.random.Generator(np.random.Philox(derive_seed_sequence(master_seed, *path)))
