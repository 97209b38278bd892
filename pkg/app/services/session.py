"""Game simulator: runs full games and feeds decision transitions to the agents."""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from app.adapters.agent.actor_critic import ActorCriticAgent
from app.adapters.agent.base import Action, DecisionPolicy, Transition
from app.adapters.agent.factory import get_policy, slot_encoding
from app.config import Settings, get_settings
from app.core.rng import derive_seed
from app.models.card import DeckSpec
from app.models.game import EncodingScheme, GameState, Outcome, dump_state
from app.schemas.evaluation import AssignmentSpec, PolicyKind, Role
from app.schemas.game import GameConfig
from app.services import decoder
from app.services.encoder import StateEncoder
from app.services.engine import GameEngine

TraceSink = Callable[[str], None]


def _vector_text(values: np.ndarray) -> str:
    return " ".join(str(int(v)) for v in values)


@dataclass
class Lineup:
    """Policies seated at the three decision phases."""

    spec: AssignmentSpec
    policies: Dict[Role, DecisionPolicy]
    questing_scheme: EncodingScheme = EncodingScheme.QUESTING2

    def kind(self, role: Role) -> PolicyKind:
        return self.spec.slot(role).kind

    def agents(self) -> Dict[Role, ActorCriticAgent]:
        """The learning (actor-critic) policies, by role."""
        return {
            role: policy
            for role, policy in self.policies.items()
            if isinstance(policy, ActorCriticAgent)
        }

    def copy(self) -> "Lineup":
        policies = {
            role: policy.copy() if isinstance(policy, ActorCriticAgent) else policy
            for role, policy in self.policies.items()
        }
        return Lineup(self.spec, policies, self.questing_scheme)

    def frozen(self) -> "Lineup":
        clone = self.copy()
        for policy in clone.policies.values():
            policy.freeze()
        return clone


def build_lineup(
    spec: AssignmentSpec,
    settings: Optional[Settings] = None,
    seed: int = 0,
) -> Lineup:
    """Instantiate every slot; fresh RL agents are seeded per role."""
    settings = settings or get_settings()
    policies = {
        role: get_policy(role, spec.slot(role), settings, derive_seed(seed, "init", role.value))
        for role in Role
    }
    questing = policies[Role.QUESTING]
    agent = questing if isinstance(questing, ActorCriticAgent) else None
    scheme = EncodingScheme.questing(slot_encoding(spec.questing, settings, agent))
    return Lineup(spec=spec, policies=policies, questing_scheme=scheme)


class Seat:
    """One policy at one decision phase within a single game.

    Holds the pending (features, action, mask) of the previous decision until
    the next decision's features or the terminal reward close the transition.
    """

    def __init__(
        self,
        role: Role,
        policy: DecisionPolicy,
        rng: np.random.Generator,
        learn: bool,
        trace: Optional[TraceSink] = None,
    ):
        self.role = role
        self.policy = policy
        self.rng = rng
        self.learn = learn and policy.learning
        self.trace = trace
        self.pending: Optional[Tuple[np.ndarray, Action, np.ndarray]] = None
        self.decisions = 0

    def decide(self, features: np.ndarray, mask: np.ndarray) -> Action:
        action, logprob = self.policy.act(features, mask, self.rng)
        if self.pending is not None and self.learn:
            state, last_action, last_mask = self.pending
            self.policy.observe(Transition(state, last_action, last_mask, 0, features, False))
        self.pending = (features, action, np.asarray(mask, dtype=bool))
        self.decisions += 1
        if self.trace is not None:
            shown = _vector_text(action) if isinstance(action, np.ndarray) else str(action)
            self.trace(f"decide {self.role.value} features {_vector_text(features)} action {shown} logprob {logprob:.6f}")
        return action

    def finish(self, reward: int) -> None:
        if self.pending is not None and self.learn:
            state, action, mask = self.pending
            self.policy.observe(Transition(state, action, mask, reward, None, True))
        self.pending = None


@dataclass
class GameResult:
    outcome: Outcome
    reward: int
    rounds: int
    decisions: Dict[Role, int] = field(default_factory=dict)

    @property
    def win(self) -> bool:
        return self.outcome is Outcome.WIN


def play_game(
    engine: GameEngine,
    lineup: Lineup,
    config: GameConfig,
    deck: DeckSpec,
    rng: np.random.Generator,
    learn: bool = True,
    trace: Optional[TraceSink] = None,
) -> GameResult:
    """Play one game to completion with the lineup's policies."""
    encoder = StateEncoder(engine)
    state = engine.new_game(config, deck)
    seats = {role: Seat(role, lineup.policies[role], rng, learn, trace) for role in Role}
    played = 0

    def emit(label: str) -> None:
        if trace is not None:
            trace(f"round {played} {label} threat {state.threat_level} progress {state.quest_progress}")

    if trace is not None:
        trace(dump_state(state).rstrip("\n"))

    while not state.is_over:
        # counted before refresh advances the round number
        played = state.round
        engine.resource_phase(state)
        emit("resource")
        _planning(engine, state, lineup, seats[Role.PLANNING], encoder)
        engine.end_planning(state)
        emit("planning")
        _questing(engine, state, lineup, seats[Role.QUESTING], encoder)
        emit("questing")
        if state.is_over:
            break
        engine.travel_phase(state)
        engine.encounter_phase(state)
        emit("encounter")
        decoder.direct_defense(engine, state, seats[Role.DEFENSE], encoder)
        emit("defense")
        if state.is_over:
            break
        engine.attack_phase(state)
        engine.refresh_phase(state)
        emit("refresh")
        if trace is not None:
            trace(dump_state(state).rstrip("\n"))

    reward = state.outcome.reward
    for seat in seats.values():
        seat.finish(reward)
    if trace is not None:
        trace(f"outcome {state.outcome.value} reward {reward} rounds {played}")
        trace(dump_state(state).rstrip("\n"))
    return GameResult(
        outcome=state.outcome,
        reward=reward,
        rounds=played,
        decisions={role: seat.decisions for role, seat in seats.items()},
    )


def _all_betas() -> np.ndarray:
    return np.ones(len(decoder.MACRO_BETAS), dtype=bool)


def _planning(engine: GameEngine, state: GameState, lineup: Lineup, seat: Seat, encoder: StateEncoder) -> None:
    if lineup.kind(Role.PLANNING) is PolicyKind.RL_MACRO:
        if engine.affordable_cards(state):
            index = int(seat.decide(encoder.encode_planning(state), _all_betas()))
            decoder.macro_planning(engine, state, decoder.MACRO_BETAS[index])
        return
    decoder.direct_planning_loop(engine, state, seat, encoder)


def _questing(engine: GameEngine, state: GameState, lineup: Lineup, seat: Seat, encoder: StateEncoder) -> None:
    if lineup.kind(Role.QUESTING) is PolicyKind.RL_MACRO:
        index = int(seat.decide(encoder.encode_questing(state, lineup.questing_scheme), _all_betas()))
        engine.questing_phase(state, decoder.macro_questing(engine, state, decoder.MACRO_BETAS[index]))
        return
    decoder.direct_questing(engine, state, seat, encoder, lineup.questing_scheme)

