"""Seed splitting.

One user seed (an unsigned 64-bit int) feeds every random choice. Each
consumer derives its own stream from ``(seed, *keys)`` through
``numpy.random.SeedSequence``; string keys are mapped with CRC-32 so that
streams depend on names, not call order.
"""

from __future__ import annotations

import zlib

import numpy as np

SEED_MASK = 2**64 - 1


def _key(k) -> int:
    if isinstance(k, str):
        return zlib.crc32(k.encode())
    return int(k)


def substream(seed: int, *keys) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(_key(k) for k in keys))
    return np.random.default_rng(ss)


def derive_seed(seed: int, *keys) -> int:
    ss = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(_key(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
