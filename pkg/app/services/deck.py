"""Seeded deck construction."""

from typing import List

from app.core.rng import GameRNG
from app.exceptions import SchemaError
from app.models.card import ALLY_IDS, DECK_SIZE, CardDb, DeckSpec, ENEMY_IDS, LAND_IDS


def validate_deck_spec(db: CardDb, spec: DeckSpec) -> None:
    """Every id must be an ally of ``db`` and the deck must hold 30 cards."""
    for card_id, _ in spec.entries:
        if card_id not in ALLY_IDS or card_id not in db:
            raise SchemaError(f"deck id {card_id} is not an ally", {"id": card_id})
    if spec.total != DECK_SIZE:
        raise SchemaError(f"deck has {spec.total} cards, expected {DECK_SIZE}", {"total": spec.total})


def build_player_deck(db: CardDb, spec: DeckSpec, rng: GameRNG) -> List[int]:
    """Shuffled 30-card player deck."""
    validate_deck_spec(db, spec)
    return rng.shuffled(spec.expand())


def build_encounter_deck(db: CardDb, rng: GameRNG) -> List[int]:
    """Shuffled encounter deck from the copy table shipped with ``db``."""
    cards: List[int] = []
    for card_id, copies in db.encounter_copies.items():
        if card_id not in db or (card_id not in ENEMY_IDS and card_id not in LAND_IDS):
            raise SchemaError(f"copy table id {card_id} is not an enemy or land", {"id": card_id})
        cards.extend([card_id] * copies)
    return rng.shuffled(cards)
