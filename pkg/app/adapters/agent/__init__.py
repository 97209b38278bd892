"""Decision policies."""

from app.adapters.agent.actor_critic import ActorCriticAgent
from app.adapters.agent.base import (
    ActionHead,
    ActionSpace,
    DecisionPolicy,
    Transition,
    action_space,
    episode_credit,
)
from app.adapters.agent.uniform import RandomAgent

__all__ = [
    "ActionHead",
    "ActionSpace",
    "ActorCriticAgent",
    "DecisionPolicy",
    "RandomAgent",
    "Transition",
    "action_space",
    "episode_credit",
]
