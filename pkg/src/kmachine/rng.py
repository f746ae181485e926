"""Deterministic randomness derivation.

Every random draw in the simulator is keyed by (seed, domain tag, integers),
so executions are reproducible regardless of scheduling or call order.
"""

import hashlib
import random
import struct

import numpy as np


def derive(seed: int, tag: str, *parts: int) -> int:
    """Derive a 64-bit integer from a seed, a domain tag and integer parts."""
    h = hashlib.blake2b(digest_size=8)
    h.update(tag.encode("utf-8"))
    h.update(b"\x00")
    h.update(struct.pack(">q", seed))
    for p in parts:
        h.update(struct.pack(">q", p))
    return int.from_bytes(h.digest(), "big")


def make_random(seed: int, tag: str, *parts: int) -> random.Random:
    return random.Random(derive(seed, tag, *parts))


def make_np_rng(seed: int, tag: str, *parts: int) -> np.random.Generator:
    return np.random.default_rng(derive(seed, tag, *parts))
