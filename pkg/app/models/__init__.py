"""Domain models."""

from app.models.card import (
    ALLY_IDS,
    ENEMY_IDS,
    HERO_IDS,
    LAND_IDS,
    QUESTING_ALLY_IDS,
    TRANSIENT_IDS,
    CardDb,
    CardDef,
    CardKind,
    DeckSpec,
)
from app.models.game import (
    ActiveLocation,
    CharacterInPlay,
    EncodingScheme,
    EngagedEnemy,
    GameState,
    Outcome,
    Phase,
    dump_state,
)

__all__ = [
    # Cards
    "ALLY_IDS",
    "ENEMY_IDS",
    "HERO_IDS",
    "LAND_IDS",
    "QUESTING_ALLY_IDS",
    "TRANSIENT_IDS",
    "CardDb",
    "CardDef",
    "CardKind",
    "DeckSpec",
    # Game
    "ActiveLocation",
    "CharacterInPlay",
    "EncodingScheme",
    "EngagedEnemy",
    "GameState",
    "Outcome",
    "Phase",
    "dump_state",
]
