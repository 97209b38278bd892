"""Round state machine: rule-based activities, random events and decision hooks."""

from typing import Dict, List, Mapping, Optional, Union

from app.core.rng import GameRNG
from app.exceptions import (
    AttackerNotEngaged,
    DoubleAssignment,
    InvalidDefender,
    NotInHand,
    NotOnTable,
    NotReady,
    TransientCommit,
    Unaffordable,
    WrongPhase,
)
from app.logging_config import StructuredLogger
from app.models.card import CardDb, CardKind, DeckSpec
from app.models.game import (
    ActiveLocation,
    CharacterInPlay,
    EngagedEnemy,
    GameState,
    Outcome,
    Phase,
    next_phase,
)
from app.schemas.common import validated
from app.schemas.game import GameConfig
from app.services.deck import build_encounter_deck, build_player_deck

logger = StructuredLogger(__name__)


class GameEngine:
    """Applies the rules of one solo game to a GameState."""

    def __init__(self, db: CardDb):
        self.db = db
        self.hero_ids = db.ids_of(CardKind.HERO)

    # ===== SETUP =====

    def new_game(self, config: Union[GameConfig, dict], deck: DeckSpec) -> GameState:
        """Shuffle both decks, deal the opening hand and seat the heroes."""
        if not isinstance(config, GameConfig):
            config = validated(GameConfig, **config)
        rng = GameRNG(config.seed)
        player_deck = build_player_deck(self.db, deck, rng)
        encounter_deck = build_encounter_deck(self.db, rng)
        hand = player_deck[: config.opening_hand]
        state = GameState(
            rng=rng,
            difficulty=config.difficulty,
            max_rounds=config.max_rounds,
            threat_limit=config.threat_limit,
            threat_level=config.starting_threat,
            hand=hand,
            table=[CharacterInPlay(card=hero) for hero in self.hero_ids],
            player_deck=player_deck[len(hand):],
            encounter_deck=encounter_deck,
        )
        logger.debug("Game created", seed=config.seed, difficulty=config.difficulty)
        return state

    # ===== QUERIES =====

    def combined_threat(self, state: GameState) -> int:
        """Sum of threat over the staging area."""
        return sum(self.db[card].threat for card in state.staging_area)

    def affordable_cards(self, state: GameState) -> List[int]:
        """Distinct hand ids with cost <= resource pool, ascending."""
        return sorted({c for c in state.hand if self.db[c].cost <= state.resource_pool})

    def heroes_alive(self, state: GameState) -> int:
        return sum(1 for c in state.table if self.db[c.card].kind == CardKind.HERO)

    def remaining_hp(self, character: Union[CharacterInPlay, EngagedEnemy]) -> int:
        return self.db[character.card].hit_points - character.damage

    def ready_characters(self, state: GameState, questing: bool = False) -> List[CharacterInPlay]:
        """Ready characters on the table; ``questing`` excludes transient allies."""
        return [
            c
            for c in state.table
            if c.ready and not (questing and self.db[c.card].transient)
        ]

    # ===== PHASES =====

    def resource_phase(self, state: GameState) -> None:
        """One resource per surviving hero, then draw one card."""
        self._require_phase(state, Phase.RESOURCE)
        state.resource_pool += self.heroes_alive(state)
        if state.player_deck:
            state.hand.append(state.player_deck.pop(0))
        state.random_events += 1
        state.phase = Phase.PLANNING

    def apply_planning(self, state: GameState, card: int) -> None:
        """Play one ally from hand onto the table."""
        self._require_phase(state, Phase.PLANNING)
        if card not in state.hand:
            raise NotInHand(f"Card {card} is not in hand", {"card": card})
        cost = self.db[card].cost
        if cost > state.resource_pool:
            raise Unaffordable(
                f"Card {card} costs {cost}, pool is {state.resource_pool}",
                {"card": card, "cost": cost, "pool": state.resource_pool},
            )
        state.hand.remove(card)
        state.table.append(CharacterInPlay(card=card))
        state.resource_pool -= cost

    def end_planning(self, state: GameState) -> None:
        self._require_phase(state, Phase.PLANNING)
        state.phase = Phase.QUESTING

    def questing_phase(self, state: GameState, committed: List[int]) -> None:
        """Commit characters, reveal one encounter card and resolve the quest."""
        self._require_phase(state, Phase.QUESTING)
        chosen = self._pick_committed(state, committed)
        for character in chosen:
            character.exhausted = True
            character.committed = True

        self._reveal(state)

        willpower = sum(self.db[c.card].willpower for c in state.table if c.committed)
        threat = self.combined_threat(state)
        if willpower > threat:
            self._apply_progress(state, willpower - threat)
        elif willpower < threat:
            state.threat_level += threat - willpower

        if state.quest_progress >= state.difficulty:
            state.outcome = Outcome.WIN
        elif state.threat_level >= state.threat_limit:
            state.outcome = Outcome.LOSS_THREAT
        self._advance(state)

    def travel_phase(self, state: GameState) -> None:
        """Travel to the highest-threat land when no location is active."""
        self._require_phase(state, Phase.TRAVEL)
        if state.active_location is None:
            lands = [c for c in state.staging_area if self.db[c].kind == CardKind.LAND]
            if lands:
                land = max(lands, key=lambda c: (self.db[c].threat, -c))
                state.staging_area.remove(land)
                state.active_location = ActiveLocation(card=land)
        self._advance(state)

    def encounter_phase(self, state: GameState) -> None:
        """Enemies with engagement cost <= threat level engage, cheapest first."""
        self._require_phase(state, Phase.ENCOUNTER)
        engaging = [
            c
            for c in state.staging_area
            if self.db[c].kind == CardKind.ENEMY
            and self.db[c].engagement_cost <= state.threat_level
        ]
        engaging.sort(key=lambda c: (self.db[c].engagement_cost, c))
        for card in engaging:
            state.staging_area.remove(card)
            state.engagement_area.append(EngagedEnemy(card=card))
        self._advance(state)

    def attack_order(self, state: GameState) -> List[int]:
        """Engagement-area positions in attack (ascending id) order."""
        return sorted(
            range(len(state.engagement_area)),
            key=lambda i: (state.engagement_area[i].card, i),
        )

    def defense_phase(self, state: GameState, assignments: Mapping[int, Optional[int]]) -> None:
        """Resolve every engaged enemy's attack.

        ``assignments`` maps an engagement-area position to a defender card
        id, or None for an undefended attack.
        """
        self._require_phase(state, Phase.DEFENSE)
        defenders = self._pick_defenders(state, assignments)

        for position in self.attack_order(state):
            if self.heroes_alive(state) == 0:
                break
            enemy = self.db[state.engagement_area[position].card]
            defender = defenders.get(position)
            if defender is not None and any(c is defender for c in state.table):
                defender.exhausted = True
                self._damage(state, defender, max(0, enemy.attack - self.db[defender.card].defense))
            else:
                heroes = [c for c in state.table if self.db[c.card].kind == CardKind.HERO]
                target = max(heroes, key=lambda c: (self.remaining_hp(c), -c.card))
                self._damage(state, target, enemy.attack)

        if self.heroes_alive(state) == 0:
            state.outcome = Outcome.LOSS_HEROES_DEAD
        self._advance(state)

    def attack_phase(self, state: GameState) -> None:
        """Ready, uncommitted characters jointly strike the weakest engaged enemy."""
        self._require_phase(state, Phase.ATTACK)
        attackers = self.ready_characters(state)
        if attackers and state.engagement_area:
            position = min(
                range(len(state.engagement_area)),
                key=lambda i: (
                    self.remaining_hp(state.engagement_area[i]),
                    state.engagement_area[i].card,
                    i,
                ),
            )
            target = state.engagement_area[position]
            enemy = self.db[target.card]
            total = sum(self.db[c.card].attack for c in attackers)
            for character in attackers:
                character.exhausted = True
            target.damage += max(0, total - enemy.defense)
            if target.damage >= enemy.hit_points:
                state.engagement_area.pop(position)
                state.encounter_discard.append(target.card)
        self._advance(state)

    def refresh_phase(self, state: GameState) -> None:
        """Ready everything, discard transient allies, raise threat, next round."""
        self._require_phase(state, Phase.REFRESH)
        kept: List[CharacterInPlay] = []
        for character in state.table:
            if self.db[character.card].transient:
                state.player_discard.append(character.card)
                continue
            character.exhausted = False
            character.committed = False
            kept.append(character)
        state.table = kept
        state.threat_level += 1
        state.round += 1
        if state.threat_level >= state.threat_limit:
            state.outcome = Outcome.LOSS_THREAT
        elif state.round > state.max_rounds:
            state.outcome = Outcome.LOSS_TIMEOUT
        state.phase = Phase.RESOURCE

    # ===== INTERNALS =====

    def _require_phase(self, state: GameState, phase: Phase) -> None:
        if state.is_over:
            raise WrongPhase(f"Game is over ({state.outcome.value})", {"phase": phase.value})
        if state.phase != phase:
            raise WrongPhase(
                f"Expected phase {phase.value}, game is in {state.phase.value}",
                {"expected": phase.value, "actual": state.phase.value},
            )

    def _advance(self, state: GameState) -> None:
        if not state.is_over:
            state.phase = next_phase(state.phase)

    def _reveal(self, state: GameState) -> None:
        if not state.encounter_deck and state.encounter_discard:
            state.encounter_deck = state.rng.shuffled(state.encounter_discard)
            state.encounter_discard = []
        if state.encounter_deck:
            state.staging_area.append(state.encounter_deck.pop(0))
        state.random_events += 1

    def _apply_progress(self, state: GameState, amount: int) -> None:
        location = state.active_location
        if location is not None:
            needed = self.db[location.card].quest_points - location.progress
            if amount >= needed:
                amount -= needed
                state.encounter_discard.append(location.card)
                state.active_location = None
            else:
                location.progress += amount
                amount = 0
        state.quest_progress += amount

    def _damage(self, state: GameState, character: CharacterInPlay, amount: int) -> None:
        character.damage += amount
        if character.damage >= self.db[character.card].hit_points:
            state.table = [c for c in state.table if c is not character]
            state.player_discard.append(character.card)

    def _pick_committed(self, state: GameState, committed: List[int]) -> List[CharacterInPlay]:
        """Map committed ids (with multiplicity) to distinct ready copies."""
        chosen: List[CharacterInPlay] = []
        for card in committed:
            copies = [c for c in state.table if c.card == card]
            if not copies:
                raise NotOnTable(f"Card {card} is not on the table", {"card": card})
            if self.db[card].transient:
                raise TransientCommit(f"Card {card} is transient", {"card": card})
            free = [c for c in copies if c.ready and not any(c is x for x in chosen)]
            if not free:
                raise NotReady(f"No ready copy of card {card}", {"card": card})
            chosen.append(free[0])
        return chosen

    def _pick_defenders(
        self, state: GameState, assignments: Mapping[int, Optional[int]]
    ) -> Dict[int, CharacterInPlay]:
        """Map attacker positions to distinct ready defender copies."""
        picked: Dict[int, CharacterInPlay] = {}
        for position in sorted(assignments):
            if not 0 <= position < len(state.engagement_area):
                raise AttackerNotEngaged(
                    f"No engaged enemy at position {position}", {"position": position}
                )
            card = assignments[position]
            if card is None:
                continue
            copies = [c for c in state.table if c.card == card and c.ready]
            if not copies:
                raise InvalidDefender(
                    f"Card {card} is not a ready, uncommitted character on the table",
                    {"card": card},
                )
            free = [c for c in copies if not any(c is p for p in picked.values())]
            if not free:
                raise DoubleAssignment(f"Card {card} already defends", {"card": card})
            picked[position] = max(free, key=self.remaining_hp)
        return picked
