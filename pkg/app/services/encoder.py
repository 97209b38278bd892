"""Feature vectors for the three decision phases."""

from typing import Dict, Iterable, Mapping, Optional

import numpy as np

from app.exceptions import AttackerNotEngaged, WrongPhase
from app.models.card import ALLY_IDS, ENEMY_IDS, HERO_IDS, LAND_IDS, QUESTING_ALLY_IDS
from app.models.game import EncodingScheme, GameState
from app.services.engine import GameEngine

# Character prefix shared by questing and defense: 3 heroes + 15 questing allies
CHARACTER_SLOTS = len(HERO_IDS) + len(QUESTING_ALLY_IDS)
ENEMY_SLOTS = len(ENEMY_IDS)
LAND_SLOTS = len(LAND_IDS)
HAND_SLOTS = len(ALLY_IDS)

DIMENSIONS: Dict[EncodingScheme, int] = {
    EncodingScheme.PLANNING: HAND_SLOTS + ENEMY_SLOTS + 1,
    EncodingScheme.QUESTING0: CHARACTER_SLOTS + ENEMY_SLOTS + 1,
    EncodingScheme.QUESTING1: CHARACTER_SLOTS + LAND_SLOTS + ENEMY_SLOTS + 1,
    EncodingScheme.QUESTING2: CHARACTER_SLOTS + ENEMY_SLOTS + 1,
    EncodingScheme.QUESTING3: CHARACTER_SLOTS + ENEMY_SLOTS + 1,
    EncodingScheme.DEFENSE: CHARACTER_SLOTS + 2 * ENEMY_SLOTS,
}


def dimension(scheme: EncodingScheme) -> int:
    """Vector length of a scheme."""
    return DIMENSIONS[scheme]


def _mark(vector: np.ndarray, offset: int, ids: Iterable[int], base: range) -> None:
    """Set presence bits for the ids that fall inside ``base``."""
    for card in ids:
        if card in base:
            vector[offset + card - base.start] = 1


class StateEncoder:
    """Turns a GameState into the integer vector of one scheme."""

    def __init__(self, engine: GameEngine):
        self.engine = engine

    def encode(
        self,
        state: GameState,
        scheme: EncodingScheme,
        attacker: Optional[int] = None,
    ) -> np.ndarray:
        if scheme is EncodingScheme.PLANNING:
            return self.encode_planning(state)
        if scheme is EncodingScheme.DEFENSE:
            return self.encode_defense(state, attacker)
        return self.encode_questing(state, scheme)

    def encode_planning(self, state: GameState) -> np.ndarray:
        """Hand allies, staging enemies, resource pool."""
        self._require_phase(state, EncodingScheme.PLANNING)
        vector = np.zeros(DIMENSIONS[EncodingScheme.PLANNING], dtype=np.int64)
        _mark(vector, 0, state.hand, ALLY_IDS)
        _mark(vector, HAND_SLOTS, state.staging_area, ENEMY_IDS)
        vector[-1] = state.resource_pool
        return vector

    def encode_questing(self, state: GameState, scheme: EncodingScheme) -> np.ndarray:
        """Character prefix, then the scheme's enemy/land segments and scalar."""
        self._require_phase(state, scheme)
        vector = np.zeros(DIMENSIONS[scheme], dtype=np.int64)
        self._mark_characters(vector, state, ready_only=False)
        offset = CHARACTER_SLOTS

        if scheme is EncodingScheme.QUESTING1:
            lands = list(state.staging_area)
            if state.active_location is not None:
                lands.append(state.active_location.card)
            _mark(vector, offset, lands, LAND_IDS)
            offset += LAND_SLOTS

        if scheme is EncodingScheme.QUESTING3:
            _mark(vector, offset, [e.card for e in state.engagement_area], ENEMY_IDS)
        else:
            _mark(vector, offset, state.staging_area, ENEMY_IDS)

        if scheme in (EncodingScheme.QUESTING0, EncodingScheme.QUESTING1):
            vector[-1] = state.round
        else:
            vector[-1] = self.engine.combined_threat(state)
        return vector

    def encode_defense(
        self,
        state: GameState,
        attacker: Optional[int],
        assigned: Optional[Mapping[int, int]] = None,
    ) -> np.ndarray:
        """Ready characters, engaged enemies and a one-hot of the attacker.

        ``assigned`` counts copies already chosen as defenders this phase; a
        character type stays marked only while it has an unassigned ready copy.
        """
        self._require_phase(state, EncodingScheme.DEFENSE)
        engaged = [e.card for e in state.engagement_area]
        if attacker is None or attacker not in engaged:
            raise AttackerNotEngaged(f"Card {attacker} is not engaged", {"card": attacker})
        vector = np.zeros(DIMENSIONS[EncodingScheme.DEFENSE], dtype=np.int64)
        self._mark_characters(vector, state, ready_only=True, assigned=assigned)
        _mark(vector, CHARACTER_SLOTS, engaged, ENEMY_IDS)
        _mark(vector, CHARACTER_SLOTS + ENEMY_SLOTS, [attacker], ENEMY_IDS)
        return vector

    def _mark_characters(
        self,
        vector: np.ndarray,
        state: GameState,
        ready_only: bool,
        assigned: Optional[Mapping[int, int]] = None,
    ) -> None:
        # slot == card id for heroes 0..2 and questing allies 3..17
        copies: Dict[int, int] = {}
        for character in state.table:
            if ready_only and not character.ready:
                continue
            if character.card in HERO_IDS or character.card in QUESTING_ALLY_IDS:
                copies[character.card] = copies.get(character.card, 0) + 1
        for card, count in copies.items():
            if count > (assigned or {}).get(card, 0):
                vector[card] = 1

    @staticmethod
    def _require_phase(state: GameState, scheme: EncodingScheme) -> None:
        if state.phase != scheme.phase:
            raise WrongPhase(
                f"Scheme {scheme.value} encodes {scheme.phase.value} states, game is in {state.phase.value}",
                {"scheme": scheme.value, "phase": state.phase.value},
            )
