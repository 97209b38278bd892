"""Uniform random baseline policy."""

from typing import Tuple

import numpy as np

from app.adapters.agent.base import Action, ActionHead, DecisionPolicy
from app.exceptions import EmptyMask


class RandomAgent(DecisionPolicy):
    """Uniform over legal options; a fair coin per legal slot for commit masks."""

    def __init__(self, head: ActionHead = ActionHead.CATEGORICAL):
        self.head = head
        self.learning = False

    def act(self, features: np.ndarray, mask: np.ndarray, rng: np.random.Generator) -> Tuple[Action, float]:
        mask = np.asarray(mask, dtype=bool)
        if self.head is ActionHead.MASK:
            bits = (rng.random(mask.size) < 0.5) & mask
            return bits, -float(mask.sum()) * np.log(2.0)

        legal = np.flatnonzero(mask)
        if legal.size == 0:
            raise EmptyMask("No legal option to choose from")
        choice = int(legal[rng.integers(legal.size)])
        return choice, -float(np.log(legal.size))
