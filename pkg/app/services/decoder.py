"""Agent outputs to game actions: macroactions and direct card choice."""

from collections import Counter
from typing import Dict, List, Optional, Protocol, Union

import numpy as np

from app.models.card import ALLY_IDS, HERO_IDS, QUESTING_ALLY_IDS, CardDef
from app.models.game import EncodingScheme, GameState
from app.services.encoder import CHARACTER_SLOTS, HAND_SLOTS, StateEncoder
from app.services.engine import GameEngine

MACRO_BETAS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)

# Direct planning: 17 hand slots + pass
PLANNING_PASS = HAND_SLOTS
PLANNING_ACTIONS = HAND_SLOTS + 1

# Direct questing: one bit per character slot
QUESTING_SLOTS = CHARACTER_SLOTS

# Direct defense: 18 character slots + no defender
NO_DEFENDER = CHARACTER_SLOTS
DEFENSE_ACTIONS = CHARACTER_SLOTS + 1

Action = Union[int, np.ndarray]


class DecisionMaker(Protocol):
    """Anything that turns (features, legality mask) into an action."""

    def decide(self, features: np.ndarray, mask: np.ndarray) -> Action:
        ...


def score_card(card: CardDef, beta: float, questing: bool = False) -> float:
    """(beta * willpower + (1 - beta) * defense) / max(cost, 1).

    Questing scores use a cost of 1.
    """
    cost = 1 if questing else max(card.cost, 1)
    return (beta * card.willpower + (1.0 - beta) * card.defense) / cost


def rank_cards(engine: GameEngine, cards: List[int], beta: float, questing: bool = False) -> List[int]:
    """Descending score, ascending id on ties."""
    return sorted(cards, key=lambda c: (-score_card(engine.db[c], beta, questing), c))


# ===== MACROACTIONS =====


def macro_planning(engine: GameEngine, state: GameState, beta: float) -> List[int]:
    """Buy hand cards greedily in score order; returns the purchases."""
    purchases: List[int] = []
    for card in rank_cards(engine, list(state.hand), beta):
        if engine.db[card].cost <= state.resource_pool:
            engine.apply_planning(state, card)
            purchases.append(card)
    return purchases


def macro_questing(engine: GameEngine, state: GameState, beta: float) -> List[int]:
    """Shortest score-ordered prefix of ready characters whose willpower beats the threat."""
    threat = engine.combined_threat(state)
    cards = [c.card for c in engine.ready_characters(state, questing=True)]
    committed: List[int] = []
    willpower = 0
    for card in rank_cards(engine, cards, beta, questing=True):
        if willpower > threat:
            break
        committed.append(card)
        willpower += engine.db[card].willpower
    return committed


# ===== DIRECT CHOICE =====


def planning_mask(engine: GameEngine, state: GameState) -> np.ndarray:
    mask = np.zeros(PLANNING_ACTIONS, dtype=bool)
    for card in engine.affordable_cards(state):
        mask[card - ALLY_IDS.start] = True
    mask[PLANNING_PASS] = True
    return mask


def direct_planning_loop(
    engine: GameEngine, state: GameState, agent: DecisionMaker, encoder: StateEncoder
) -> List[int]:
    """Ask for one card at a time until the agent passes or nothing is affordable."""
    purchases: List[int] = []
    while engine.affordable_cards(state):
        features = encoder.encode_planning(state)
        action = int(agent.decide(features, planning_mask(engine, state)))
        if action == PLANNING_PASS:
            break
        card = ALLY_IDS.start + action
        engine.apply_planning(state, card)
        purchases.append(card)
    return purchases


def questing_mask(engine: GameEngine, state: GameState) -> np.ndarray:
    mask = np.zeros(QUESTING_SLOTS, dtype=bool)
    for character in engine.ready_characters(state, questing=True):
        if character.card in HERO_IDS or character.card in QUESTING_ALLY_IDS:
            mask[character.card] = True
    return mask


def commit_from_mask(engine: GameEngine, state: GameState, bits: np.ndarray) -> List[int]:
    """Every ready copy of each selected, legal card type."""
    legal = questing_mask(engine, state)
    selected = np.asarray(bits, dtype=bool) & legal
    return [
        c.card
        for c in engine.ready_characters(state, questing=True)
        if c.card < QUESTING_SLOTS and selected[c.card]
    ]


def direct_questing(
    engine: GameEngine,
    state: GameState,
    agent: DecisionMaker,
    encoder: StateEncoder,
    scheme: EncodingScheme,
) -> List[int]:
    """One commit mask, applied through the questing phase."""
    features = encoder.encode_questing(state, scheme)
    bits = agent.decide(features, questing_mask(engine, state))
    committed = commit_from_mask(engine, state, bits)
    engine.questing_phase(state, committed)
    return committed


def defense_mask(engine: GameEngine, state: GameState, used: Counter) -> np.ndarray:
    """Ready encodable characters with a copy not yet assigned, plus no defender."""
    ready = Counter(
        c.card for c in engine.ready_characters(state) if c.card < CHARACTER_SLOTS
    )
    mask = np.zeros(DEFENSE_ACTIONS, dtype=bool)
    for card, copies in ready.items():
        if copies > used[card]:
            mask[card] = True
    mask[NO_DEFENDER] = True
    return mask


def direct_defense(
    engine: GameEngine, state: GameState, agent: DecisionMaker, encoder: StateEncoder
) -> Dict[int, Optional[int]]:
    """Pick a defender per attacker in id order, then resolve the defense phase."""
    assignments: Dict[int, Optional[int]] = {}
    used: Counter = Counter()
    for position in engine.attack_order(state):
        attacker = state.engagement_area[position].card
        features = encoder.encode_defense(state, attacker, used)
        action = int(agent.decide(features, defense_mask(engine, state, used)))
        if action == NO_DEFENDER:
            assignments[position] = None
        else:
            assignments[position] = action
            used[action] += 1
    engine.defense_phase(state, assignments)
    return assignments
