"""Application configuration."""

from functools import lru_cache
from pathlib import Path
from typing import List, Union

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.exceptions import ConfigError

DATA_DIR = Path(__file__).parent / "data"


def parse_int_list(v):
    """Accept "1,2,3", "1..9" or a list."""
    if isinstance(v, str):
        v = v.strip()
        if ".." in v:
            lo, hi = v.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in v.split(",") if part.strip()]
    return v


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "Quest Card RL"
    app_version: str = "1.0.0"
    log_level: str = "INFO"
    workers: int = 1

    # Data files
    cards_path: Path = DATA_DIR / "cards.csv"
    deck_path: Path = DATA_DIR / "default_deck.csv"
    encounter_copies_path: Path = DATA_DIR / "encounter_copies.csv"

    # Game
    difficulty: int = Field(20, ge=1, le=20)
    max_rounds: int = 72
    starting_threat: int = 28
    threat_limit: int = 50
    opening_hand: int = 6

    # Agent
    hidden_dim: int = 70
    actor_learning_rate: float = 6e-4
    critic_learning_rate: float = 6e-4
    gamma: float = 0.99
    questing_encoding: int = 2

    # Curriculum
    interrupt_window: int = 100
    selection_winrate: float = 0.90
    step1_difficulties: Union[List[int], str] = Field("1..9", validate_default=True)
    step2_difficulty: int = 20
    step1_iterations: int = 10
    step1_episodes: int = 1000
    step2_iterations: int = 20
    step2_episodes: int = 2500
    interrupted_step1_cap: int = 10000
    interrupted_step2_cap: int = 50000
    step1_threshold: float = 0.5
    step2_threshold: float = -0.1

    # Evaluation / HPO
    eval_games: int = 1000
    hpo_trials: int = 100
    hpo_episodes: int = 10000
    hpo_window: int = 1000
    hpo_difficulty: int = 8

    @field_validator("step1_difficulties", mode="before")
    @classmethod
    def parse_step1_difficulties(cls, v):
        """Parse step-1 difficulties from a range, comma string or list."""
        return parse_int_list(v)

    @field_validator("questing_encoding")
    @classmethod
    def check_questing_encoding(cls, v: int) -> int:
        if v not in (0, 1, 2, 3):
            raise ValueError("questing_encoding must be 0..3")
        return v


def read_config_file(path: Union[str, Path]) -> dict:
    """Parse a line-oriented ``key = value`` file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read config file {path}", {"error": str(exc)})

    known = set(Settings.model_fields)
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'", {"line": lineno})
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'", {"line": lineno})
        values[key] = value
    return values


def load_settings(path: Union[str, Path, None] = None, **overrides) -> Settings:
    """Build validated settings from an optional config file plus overrides."""
    values = read_config_file(path) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**values)
    except ValidationError as exc:
        raise ConfigError("Invalid settings", {"errors": exc.errors(include_url=False)})


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
