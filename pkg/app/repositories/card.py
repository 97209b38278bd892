"""Card database, copy table and deck spec files."""

from collections import Counter
from pathlib import Path
from typing import Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from app.exceptions import SchemaError
from app.models.card import ENEMY_IDS, KIND_COUNTS, LAND_IDS, CardDb, CardDef, DeckSpec
from app.repositories.base import CsvRepository

COPY_TABLE_NAME = "encounter_copies.csv"
DEFAULT_ENCOUNTER_COPIES = 2


class CopyRecord(BaseModel):
    """One ``id,copies`` row."""

    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=0)
    copies: int = Field(..., ge=1)


class CardRepository(CsvRepository[CardDef]):
    """Card database file."""

    header = (
        "id",
        "name",
        "kind",
        "cost",
        "willpower",
        "attack",
        "defense",
        "hit_points",
        "threat",
        "engagement_cost",
        "quest_points",
        "transient",
    )

    def __init__(self):
        super().__init__(CardDef)


class CopyRepository(CsvRepository[CopyRecord]):
    """``id,copies`` file (encounter copy table and deck specs)."""

    header = ("id", "copies")

    def __init__(self):
        super().__init__(CopyRecord)

    def load_counts(self, path: Union[str, Path]) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for _, record in self.load(path):
            if record.id in counts:
                raise SchemaError(f"duplicate {record.id}", {"id": record.id})
            counts[record.id] = record.copies
        return counts


def load_copy_table(path: Union[str, Path]) -> Dict[int, int]:
    """Load an encounter copy table; every id must be an enemy or a land."""
    counts = CopyRepository().load_counts(path)
    for card_id in counts:
        if card_id not in ENEMY_IDS and card_id not in LAND_IDS:
            raise SchemaError(f"copy table id {card_id} is not an enemy or land", {"id": card_id})
    return counts


def load_deck_spec(path: Union[str, Path]) -> DeckSpec:
    """Load a deck spec file. Validity against a CardDb is checked at build time."""
    counts = CopyRepository().load_counts(path)
    return DeckSpec(entries=tuple(sorted(counts.items())))


def load_card_db(path: Union[str, Path], copies_path: Optional[Union[str, Path]] = None) -> CardDb:
    """Load and validate the card database.

    The encounter copy table is read from ``copies_path``, else from the
    ``encounter_copies.csv`` next to the card file, else defaults to two
    copies of every enemy and land.
    """
    defs: Dict[int, CardDef] = {}
    for _, card in CardRepository().load(path):
        if card.id in defs:
            raise SchemaError(f"duplicate {card.id}", {"id": card.id})
        defs[card.id] = card

    kinds = Counter(card.kind for card in defs.values())
    for kind, expected in KIND_COUNTS.items():
        if kinds[kind] != expected:
            raise SchemaError(
                f"expected {expected} {kind.value} cards, got {kinds[kind]}",
                {"kind": kind.value},
            )

    if copies_path is None:
        sibling = Path(path).parent / COPY_TABLE_NAME
        copies_path = sibling if sibling.exists() else None
    if copies_path is not None:
        copies = load_copy_table(copies_path)
    else:
        copies = {
            card.id: DEFAULT_ENCOUNTER_COPIES
            for card in defs.values()
            if card.id in ENEMY_IDS or card.id in LAND_IDS
        }
    return CardDb(defs, copies)


def dump_card_db(db: CardDb) -> str:
    """Serialize a CardDb in the card file format, ascending id."""
    return CardRepository().dump(list(db.defs.values()))
