"""
Seeded random streams

Every randomized operation takes an explicit seed and draws from numpy's
PCG64 bit generator, so runs are reproducible bit for bit across platforms.
"""

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    """Return a PCG64-backed generator for a 64-bit seed"""
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def stable_hash(value: int) -> int:
    """64-bit hash of an integer that does not depend on PYTHONHASHSEED"""
    digest = hashlib.blake2b(str(int(value)).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_seed(seed: int, stream: int) -> int:
    """Per-stream seed (seed XOR hash(stream)), independent of scheduling"""
    return (int(seed) ^ stable_hash(stream)) & MASK64
