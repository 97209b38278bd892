"""Online one-step actor-critic agent."""

from typing import Optional, Tuple

import numpy as np

from app.adapters.agent.base import Action, ActionHead, DecisionPolicy, Transition
from app.core.neural import Mlp, log_sigmoid, masked_softmax, sigmoid
from app.logging_config import StructuredLogger
from app.models.game import EncodingScheme
from app.schemas.evaluation import Role

logger = StructuredLogger(__name__)


def log_prob(logits: np.ndarray, head: ActionHead, action: Action, mask: np.ndarray) -> float:
    """log pi(action | logits) under the head's sampling distribution."""
    mask = np.asarray(mask, dtype=bool)
    if head is ActionHead.CATEGORICAL:
        return float(np.log(masked_softmax(logits, mask)[int(action)]))
    bits = np.asarray(action, dtype=bool)
    per_slot = np.where(bits, log_sigmoid(logits), log_sigmoid(-logits))
    return float(per_slot[mask].sum())


def log_prob_gradient(logits: np.ndarray, head: ActionHead, action: Action, mask: np.ndarray) -> np.ndarray:
    """Gradient of log pi(action) with respect to the logits; zero on masked slots."""
    mask = np.asarray(mask, dtype=bool)
    if head is ActionHead.CATEGORICAL:
        grad = -masked_softmax(logits, mask)
        grad[int(action)] += 1.0
        return grad
    bits = np.asarray(action, dtype=np.float64)
    return np.where(mask, bits - sigmoid(logits), 0.0)


class ActorCriticAgent(DecisionPolicy):
    """Softmax or per-slot sigmoid actor plus a scalar critic, updated every decision.

    delta = r + gamma * v(s') - v(s)      (v(s') = 0 at terminal)
    critic: w     += alpha_critic * delta * grad v(s)
    actor:  theta += alpha_actor  * delta * grad log pi(a | s)
    """

    def __init__(
        self,
        role: Role,
        scheme: EncodingScheme,
        head: ActionHead,
        actor: Mlp,
        critic: Mlp,
        gamma: float = 0.99,
        alpha_actor: float = 6e-4,
        alpha_critic: float = 6e-4,
    ):
        if actor.input_dim != critic.input_dim or critic.output_dim != 1:
            raise ValueError("actor and critic must share the input and the critic must be scalar")
        self.role = role
        self.scheme = scheme
        self.head = head
        self.actor = actor
        self.critic = critic
        self.gamma = gamma
        self.alpha_actor = alpha_actor
        self.alpha_critic = alpha_critic
        self.learning = True
        self.updates = 0

    @classmethod
    def create(
        cls,
        role: Role,
        scheme: EncodingScheme,
        head: ActionHead,
        input_dim: int,
        output_dim: int,
        hidden_dim: int = 70,
        gamma: float = 0.99,
        alpha_actor: float = 6e-4,
        alpha_critic: float = 6e-4,
        seed: Optional[int] = None,
    ) -> "ActorCriticAgent":
        """Fresh agent with randomly initialized networks."""
        rng = np.random.default_rng(seed)
        actor_seed, critic_seed = (int(s) for s in rng.integers(0, 2**63 - 1, size=2))
        return cls(
            role=role,
            scheme=scheme,
            head=head,
            actor=Mlp.init(input_dim, hidden_dim, output_dim, actor_seed),
            critic=Mlp.init(input_dim, hidden_dim, 1, critic_seed),
            gamma=gamma,
            alpha_actor=alpha_actor,
            alpha_critic=alpha_critic,
        )

    @property
    def input_dim(self) -> int:
        return self.actor.input_dim

    @property
    def output_dim(self) -> int:
        return self.actor.output_dim

    def copy(self) -> "ActorCriticAgent":
        clone = ActorCriticAgent(
            self.role,
            self.scheme,
            self.head,
            self.actor.copy(),
            self.critic.copy(),
            self.gamma,
            self.alpha_actor,
            self.alpha_critic,
        )
        clone.learning = self.learning
        return clone

    def act(self, features: np.ndarray, mask: np.ndarray, rng: np.random.Generator) -> Tuple[Action, float]:
        logits = self.actor.predict(features)
        mask = np.asarray(mask, dtype=bool)
        if self.head is ActionHead.CATEGORICAL:
            probs = masked_softmax(logits, mask)
            choice = int(rng.choice(probs.size, p=probs))
            return choice, float(np.log(probs[choice]))

        bits = (rng.random(mask.size) < sigmoid(logits)) & mask
        return bits, log_prob(logits, self.head, bits, mask)

    def value(self, features: np.ndarray) -> float:
        return float(self.critic.predict(features)[0])

    def td_error(self, transition: Transition) -> float:
        next_value = 0.0 if transition.done else self.value(transition.next_state)
        return transition.reward + self.gamma * next_value - self.value(transition.state)

    def observe(self, transition: Transition) -> None:
        if not self.learning:
            return
        delta = self.td_error(transition)
        self.updates += 1
        if delta == 0.0:
            return

        _, critic_trace = self.critic.forward(transition.state)
        critic_grads = self.critic.backward(critic_trace, np.ones(1))

        logits, actor_trace = self.actor.forward(transition.state)
        output_grad = log_prob_gradient(logits, self.head, transition.action, transition.mask)
        actor_grads = self.actor.backward(actor_trace, output_grad)

        self.critic.apply_gradients(critic_grads, self.alpha_critic * delta)
        self.actor.apply_gradients(actor_grads, self.alpha_actor * delta)
        if transition.done:
            logger.debug("Terminal update", role=self.role.value, reward=transition.reward, delta=round(delta, 4))
