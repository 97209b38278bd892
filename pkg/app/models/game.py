"""Game state models."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from typing import List, Optional

from app.core.rng import GameRNG


class Phase(str, PyEnum):
    """Round phases, in play order."""

    RESOURCE = "Resource"
    PLANNING = "Planning"
    QUESTING = "Questing"
    TRAVEL = "Travel"
    ENCOUNTER = "Encounter"
    DEFENSE = "Defense"
    ATTACK = "Attack"
    REFRESH = "Refresh"


PHASE_ORDER = list(Phase)


def next_phase(phase: Phase) -> Phase:
    return PHASE_ORDER[(PHASE_ORDER.index(phase) + 1) % len(PHASE_ORDER)]


class Outcome(str, PyEnum):
    """Game outcome."""

    ONGOING = "Ongoing"
    WIN = "Win"
    LOSS_THREAT = "LossThreat"
    LOSS_HEROES_DEAD = "LossHeroesDead"
    LOSS_TIMEOUT = "LossTimeout"

    @property
    def reward(self) -> int:
        """Terminal reward: +1 win, -1 any loss, 0 ongoing."""
        if self is Outcome.ONGOING:
            return 0
        return 1 if self is Outcome.WIN else -1


@dataclass
class CharacterInPlay:
    """A hero or ally on the table."""

    card: int
    damage: int = 0
    exhausted: bool = False
    committed: bool = False

    @property
    def ready(self) -> bool:
        return not self.exhausted and not self.committed


@dataclass
class EngagedEnemy:
    """An enemy in the engagement area."""

    card: int
    damage: int = 0


@dataclass
class ActiveLocation:
    """The land being explored."""

    card: int
    progress: int = 0


@dataclass
class GameState:
    """Full mutable game situation."""

    rng: GameRNG
    difficulty: int
    max_rounds: int
    threat_limit: int
    round: int = 1
    phase: Phase = Phase.RESOURCE
    threat_level: int = 28
    resource_pool: int = 0
    hand: List[int] = field(default_factory=list)
    table: List[CharacterInPlay] = field(default_factory=list)
    staging_area: List[int] = field(default_factory=list)
    engagement_area: List[EngagedEnemy] = field(default_factory=list)
    active_location: Optional[ActiveLocation] = None
    quest_progress: int = 0
    player_deck: List[int] = field(default_factory=list)
    player_discard: List[int] = field(default_factory=list)
    encounter_deck: List[int] = field(default_factory=list)
    encounter_discard: List[int] = field(default_factory=list)
    outcome: Outcome = Outcome.ONGOING
    random_events: int = 0

    @property
    def is_over(self) -> bool:
        return self.outcome is not Outcome.ONGOING

    def player_cards(self) -> List[int]:
        """Every player-side card copy, across all zones."""
        return (
            self.player_deck
            + self.hand
            + [c.card for c in self.table]
            + self.player_discard
        )

    def encounter_cards(self) -> List[int]:
        """Every encounter card copy, across all zones."""
        cards = self.encounter_deck + self.staging_area + self.encounter_discard
        cards += [e.card for e in self.engagement_area]
        if self.active_location is not None:
            cards.append(self.active_location.card)
        return cards


def _ids(values) -> str:
    return " ".join(str(v) for v in values) or "-"


def dump_state(state: GameState) -> str:
    """Deterministic line-oriented dump, one zone per line.

    Ordered zones (decks, hand, table, engagement) keep their order;
    unordered ones (staging, discards) are sorted ascending.
    """
    rng_digest = hashlib.sha256(repr(state.rng.getstate()).encode()).hexdigest()[:16]
    table = " ".join(
        f"{c.card}:{c.damage}:{'E' if c.exhausted else 'R'}{'C' if c.committed else ''}"
        for c in state.table
    )
    engaged = " ".join(f"{e.card}:{e.damage}" for e in state.engagement_area)
    location = (
        f"{state.active_location.card}:{state.active_location.progress}"
        if state.active_location
        else "-"
    )
    lines = [
        f"round {state.round}",
        f"phase {state.phase.value}",
        f"outcome {state.outcome.value}",
        f"threat {state.threat_level}",
        f"pool {state.resource_pool}",
        f"progress {state.quest_progress}/{state.difficulty}",
        f"hand {_ids(state.hand)}",
        f"table {table or '-'}",
        f"staging {_ids(sorted(state.staging_area))}",
        f"engaged {engaged or '-'}",
        f"location {location}",
        f"player_deck {_ids(state.player_deck)}",
        f"player_discard {_ids(sorted(state.player_discard))}",
        f"encounter_deck {_ids(state.encounter_deck)}",
        f"encounter_discard {_ids(sorted(state.encounter_discard))}",
        f"random_events {state.random_events}",
        f"rng {rng_digest}",
    ]
    return "\n".join(lines) + "\n"


class EncodingScheme(str, PyEnum):
    """Feature layouts, one per decision phase (four for questing)."""

    PLANNING = "planning"
    QUESTING0 = "questing0"
    QUESTING1 = "questing1"
    QUESTING2 = "questing2"
    QUESTING3 = "questing3"
    DEFENSE = "defense"

    @classmethod
    def questing(cls, encoding: int) -> "EncodingScheme":
        return cls(f"questing{encoding}")

    @property
    def phase(self) -> Phase:
        """Phase in which states of this scheme are encoded."""
        if self is EncodingScheme.PLANNING:
            return Phase.PLANNING
        if self is EncodingScheme.DEFENSE:
            return Phase.DEFENSE
        return Phase.QUESTING

    @property
    def questing_encoding(self) -> Optional[int]:
        """Encoding number 0-3 of a questing scheme, None otherwise."""
        if self.phase is not Phase.QUESTING:
            return None
        return int(self.value[-1])
