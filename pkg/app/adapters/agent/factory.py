"""Build the policy of a decision slot."""

from typing import Optional

from app.adapters.agent.actor_critic import ActorCriticAgent
from app.adapters.agent.base import ActionHead, DecisionPolicy, action_space
from app.adapters.agent.uniform import RandomAgent
from app.config import Settings, get_settings
from app.exceptions import BundleMismatch, ConfigError
from app.repositories.bundle import load_bundle
from app.schemas.evaluation import Role, SlotSpec
from app.services.encoder import dimension


def slot_encoding(slot: SlotSpec, settings: Settings, agent: Optional[ActorCriticAgent] = None) -> int:
    """Explicit `:<enc>` suffix, then the loaded agent's questing scheme, then the settings default."""
    if slot.encoding is not None:
        return slot.encoding
    if agent is not None and agent.scheme.questing_encoding is not None:
        return agent.scheme.questing_encoding
    return settings.questing_encoding


def check_bundle(agent: ActorCriticAgent, role: Role, slot: SlotSpec, settings: Settings) -> None:
    """Raise BundleMismatch unless the bundle fits the slot."""
    space = action_space(role, slot.kind, slot_encoding(slot, settings, agent))
    expected = (role, space.scheme, space.head, dimension(space.scheme), space.size)
    actual = (agent.role, agent.scheme, agent.head, agent.input_dim, agent.output_dim)
    if expected != actual:
        raise BundleMismatch(
            f"Bundle does not fit the {role.value} slot ({slot.kind.value})",
            {
                "expected": [getattr(v, "value", v) for v in expected],
                "actual": [getattr(v, "value", v) for v in actual],
            },
        )


def get_policy(
    role: Role,
    slot: SlotSpec,
    settings: Optional[Settings] = None,
    seed: Optional[int] = None,
) -> DecisionPolicy:
    """Random baseline, bundled agent, or fresh actor-critic per the slot spec."""
    settings = settings or get_settings()
    if not slot.is_rl:
        if slot.bundle is not None:
            raise ConfigError(f"A {slot.kind.value} slot cannot load a bundle", {"bundle": str(slot.bundle)})
        return RandomAgent(ActionHead.MASK if role is Role.QUESTING else ActionHead.CATEGORICAL)

    if slot.bundle is not None:
        agent = load_bundle(slot.bundle)
        check_bundle(agent, role, slot, settings)
        return agent

    space = action_space(role, slot.kind, slot_encoding(slot, settings))
    return ActorCriticAgent.create(
        role=role,
        scheme=space.scheme,
        head=space.head,
        input_dim=dimension(space.scheme),
        output_dim=space.size,
        hidden_dim=settings.hidden_dim,
        gamma=settings.gamma,
        alpha_actor=settings.actor_learning_rate,
        alpha_critic=settings.critic_learning_rate,
        seed=seed,
    )
