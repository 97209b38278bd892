"""Seedable RNG wrapper and seed derivation."""

import hashlib
import random
from typing import List, Sequence, TypeVar

T = TypeVar("T")

SEED_MASK = (1 << 64) - 1


def derive_seed(master_seed: int, *keys) -> int:
    """Derive an independent 64-bit seed from a master seed and keys.

    Stable across processes and Python versions (no built-in ``hash``).
    """
    material = ":".join(str(part) for part in (master_seed, *keys))
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & SEED_MASK


class GameRNG:
    """Wrapper around random.Random; all game randomness goes through it."""

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = random.Random(seed)

    def shuffle(self, seq: List[T]) -> None:
        """Shuffle a list in place."""
        self.rng.shuffle(seq)

    def shuffled(self, seq: Sequence[T]) -> List[T]:
        out = list(seq)
        self.rng.shuffle(out)
        return out

    def random(self) -> float:
        return self.rng.random()

    def getstate(self):
        return self.rng.getstate()
