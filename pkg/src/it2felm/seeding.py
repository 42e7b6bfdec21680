"""Named random streams derived from a single master seed.

Every consumer of randomness (antecedent init, fold shuffling, sensor
noise, ...) asks for its own named stream, so adding a new consumer never
perturbs the draws seen by existing ones.
"""

from __future__ import annotations

import zlib

import numpy as np


def named_stream(seed: int, name: str) -> np.random.Generator:
    """Return a generator for `name` that is independent of other names.

    The stream is a pure function of (seed, name): the name is hashed with
    CRC-32 and used as a spawn key under the master seed.
    """
    key = zlib.crc32(name.encode("utf-8"))
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(key,))
    return np.random.default_rng(seq)
