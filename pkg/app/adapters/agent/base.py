"""Decision policy base interface."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum as PyEnum
from typing import Iterable, NamedTuple, Optional, Tuple, Union

import numpy as np

from app.models.game import EncodingScheme
from app.schemas.evaluation import PolicyKind, Role
from app.services.decoder import DEFENSE_ACTIONS, MACRO_BETAS, PLANNING_ACTIONS, QUESTING_SLOTS

Action = Union[int, np.ndarray]


class ActionHead(str, PyEnum):
    """Output head: one categorical choice or independent per-slot bits."""

    CATEGORICAL = "categorical"
    MASK = "mask"


class ActionSpace(NamedTuple):
    scheme: EncodingScheme
    head: ActionHead
    size: int


def action_space(role: Role, kind: PolicyKind, encoding: int = 2) -> ActionSpace:
    """Encoding scheme, head and output size for one decision slot."""
    if role is Role.PLANNING:
        size = len(MACRO_BETAS) if kind is PolicyKind.RL_MACRO else PLANNING_ACTIONS
        return ActionSpace(EncodingScheme.PLANNING, ActionHead.CATEGORICAL, size)
    if role is Role.QUESTING:
        scheme = EncodingScheme.questing(encoding)
        if kind is PolicyKind.RL_MACRO:
            return ActionSpace(scheme, ActionHead.CATEGORICAL, len(MACRO_BETAS))
        return ActionSpace(scheme, ActionHead.MASK, QUESTING_SLOTS)
    return ActionSpace(EncodingScheme.DEFENSE, ActionHead.CATEGORICAL, DEFENSE_ACTIONS)


@dataclass(frozen=True)
class Transition:
    """One decision step: features, action, legality mask, reward, next features."""

    state: np.ndarray
    action: Action
    mask: np.ndarray
    reward: float
    next_state: Optional[np.ndarray]
    done: bool

    def __post_init__(self):
        if self.done != (self.next_state is None):
            raise ValueError("next_state must be absent exactly at terminal transitions")
        if self.done and self.reward not in (1, -1):
            raise ValueError("terminal reward must be +1 or -1")
        if not self.done and self.reward != 0:
            raise ValueError("intermediate reward must be 0")


class DecisionPolicy(ABC):
    """Abstract decision policy."""

    head: ActionHead = ActionHead.CATEGORICAL
    learning: bool = False

    @abstractmethod
    def act(self, features: np.ndarray, mask: np.ndarray, rng: np.random.Generator) -> Tuple[Action, float]:
        """Sample an action among the legal options; return it with its log-probability."""
        pass

    def observe(self, transition: Transition) -> None:
        """Learn from one transition. Baselines ignore it."""
        return None

    def freeze(self) -> None:
        """Disable learning."""
        self.learning = False


def episode_credit(rewards: Iterable[float]) -> float:
    """Running mean Q <- Q + (R - Q) / n over the rewards."""
    mean = 0.0
    for n, reward in enumerate(rewards, start=1):
        mean += (reward - mean) / n
    return mean
