"""Game configuration schema."""

from pydantic import BaseModel, ConfigDict, Field

from app.core.rng import SEED_MASK
from app.schemas.common import validated


class GameConfig(BaseModel):
    """Per-game settings."""

    model_config = ConfigDict(frozen=True)

    difficulty: int = Field(..., ge=1, le=20, description="Quest points needed to win")
    seed: int = Field(0, ge=0, le=SEED_MASK)
    max_rounds: int = Field(72, ge=1)
    starting_threat: int = Field(28, ge=0)
    threat_limit: int = Field(50, ge=1)
    opening_hand: int = Field(6, ge=0)

    @classmethod
    def from_settings(cls, settings, difficulty: int, seed: int) -> "GameConfig":
        """Game config with the rule constants of ``settings``."""
        return validated(
            cls,
            difficulty=difficulty,
            seed=seed,
            max_rounds=settings.max_rounds,
            starting_threat=settings.starting_threat,
            threat_limit=settings.threat_limit,
            opening_hand=settings.opening_hand,
        )
