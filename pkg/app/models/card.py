"""Card models."""

from enum import Enum as PyEnum
from typing import Dict, List, Mapping, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Global id layout
HERO_IDS = range(0, 3)
ALLY_IDS = range(3, 20)
ENEMY_IDS = range(22, 37)
LAND_IDS = range(37, 43)
TRANSIENT_IDS = (18, 19)

# Allies that can quest (and be encoded in the 15 ally slots)
QUESTING_ALLY_IDS = range(3, 18)

DECK_SIZE = 30


class CardKind(str, PyEnum):
    """Card kinds."""

    HERO = "hero"
    ALLY = "ally"
    ENEMY = "enemy"
    LAND = "land"


KIND_RANGES: Dict[CardKind, range] = {
    CardKind.HERO: HERO_IDS,
    CardKind.ALLY: ALLY_IDS,
    CardKind.ENEMY: ENEMY_IDS,
    CardKind.LAND: LAND_IDS,
}

KIND_COUNTS: Dict[CardKind, int] = {kind: len(ids) for kind, ids in KIND_RANGES.items()}

# Fields meaningful per kind; all others must be 0
KIND_FIELDS: Dict[CardKind, Tuple[str, ...]] = {
    CardKind.HERO: ("willpower", "attack", "defense", "hit_points"),
    CardKind.ALLY: ("cost", "willpower", "attack", "defense", "hit_points"),
    CardKind.ENEMY: ("attack", "defense", "hit_points", "threat", "engagement_cost"),
    CardKind.LAND: ("threat", "quest_points"),
}

STAT_FIELDS = (
    "cost",
    "willpower",
    "attack",
    "defense",
    "hit_points",
    "threat",
    "engagement_cost",
    "quest_points",
)


def kind_of(card_id: int) -> CardKind:
    """Resolve the kind implied by the global id layout."""
    for kind, ids in KIND_RANGES.items():
        if card_id in ids:
            return kind
    raise ValueError(f"id {card_id} is outside the card layout")


class CardDef(BaseModel):
    """Static card record."""

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    id: int = Field(..., ge=0, le=42)
    name: str = Field(..., min_length=1, max_length=100)
    kind: CardKind
    cost: int = Field(0, ge=0)
    willpower: int = Field(0, ge=0)
    attack: int = Field(0, ge=0)
    defense: int = Field(0, ge=0)
    hit_points: int = Field(0, ge=0)
    threat: int = Field(0, ge=0)
    engagement_cost: int = Field(0, ge=0)
    quest_points: int = Field(0, ge=0)
    transient: bool = False

    @model_validator(mode="after")
    def check_layout(self) -> "CardDef":
        """Check the id range, per-kind fields and the transient rule."""
        if kind_of(self.id) != self.kind:
            raise ValueError(f"id {self.id} is not a valid {self.kind.value} id")
        meaningful = KIND_FIELDS[self.kind]
        for field in STAT_FIELDS:
            if field not in meaningful and getattr(self, field) != 0:
                raise ValueError(f"{field} must be 0 for a {self.kind.value}")
        if self.kind != CardKind.LAND and self.hit_points < 1:
            raise ValueError("hit_points must be >= 1")
        if self.transient != (self.id in TRANSIENT_IDS):
            raise ValueError(f"only ids {TRANSIENT_IDS} are transient")
        return self

    @property
    def is_character(self) -> bool:
        return self.kind in (CardKind.HERO, CardKind.ALLY)


class CardDb:
    """Validated, read-only card database."""

    def __init__(self, defs: Mapping[int, CardDef], encounter_copies: Mapping[int, int] = None):
        self.defs: Dict[int, CardDef] = dict(sorted(defs.items()))
        self.encounter_copies: Dict[int, int] = dict(sorted((encounter_copies or {}).items()))

    def __getitem__(self, card_id: int) -> CardDef:
        return self.defs[card_id]

    def __contains__(self, card_id: int) -> bool:
        return card_id in self.defs

    def __len__(self) -> int:
        return len(self.defs)

    def counts(self) -> Dict[CardKind, int]:
        """Number of definitions per kind."""
        result = {kind: 0 for kind in CardKind}
        for card in self.defs.values():
            result[card.kind] += 1
        return result

    def ids_of(self, kind: CardKind) -> List[int]:
        return [card.id for card in self.defs.values() if card.kind == kind]


class DeckSpec(BaseModel):
    """Player deck specification: (ally id, copies) entries."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[int, int], ...]

    @property
    def total(self) -> int:
        return sum(copies for _, copies in self.entries)

    def expand(self) -> List[int]:
        """Ids with multiplicity, ascending."""
        cards: List[int] = []
        for card_id, copies in sorted(self.entries):
            cards.extend([card_id] * copies)
        return cards
