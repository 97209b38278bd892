"""Shared fixtures: card data, engine, settings and state builders."""

import pytest

from app.config import DATA_DIR, Settings
from app.models.game import Phase
from app.repositories.card import load_card_db, load_deck_spec
from app.schemas.game import GameConfig
from app.services.engine import GameEngine


@pytest.fixture(scope="session")
def db():
    return load_card_db(DATA_DIR / "cards.csv")


@pytest.fixture(scope="session")
def deck():
    return load_deck_spec(DATA_DIR / "default_deck.csv")


@pytest.fixture(scope="session")
def engine(db):
    return GameEngine(db)


@pytest.fixture
def settings():
    """Small budgets so strategies and searches finish in seconds."""
    return Settings(
        workers=1,
        hidden_dim=8,
        interrupt_window=5,
        step1_difficulties="1,2",
        step2_difficulty=20,
        step1_iterations=2,
        step1_episodes=10,
        step2_iterations=2,
        step2_episodes=10,
        interrupted_step1_cap=20,
        interrupted_step2_cap=15,
        eval_games=6,
        hpo_window=5,
    )


@pytest.fixture
def make_state(engine, deck):
    """New game moved to ``phase`` with the given fields overwritten.

    The encounter deck is emptied unless given, so reveals are no-ops.
    """

    def _make(phase: Phase = Phase.PLANNING, difficulty: int = 20, seed: int = 0, **fields):
        state = engine.new_game(GameConfig(difficulty=difficulty, seed=seed), deck)
        state.phase = phase
        fields.setdefault("encounter_deck", [])
        for name, value in fields.items():
            setattr(state, name, value)
        return state

    return _make
