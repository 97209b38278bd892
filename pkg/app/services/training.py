"""Single learning runs."""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.config import Settings
from app.core.rng import derive_seed
from app.core.stats import TrailingMean
from app.exceptions import ConfigError
from app.logging_config import StructuredLogger
from app.models.card import DeckSpec
from app.models.run import RunRecord
from app.schemas.game import GameConfig
from app.schemas.training import InterruptRule, StopReason
from app.services.engine import GameEngine
from app.services.session import Lineup, play_game

logger = StructuredLogger(__name__)


def run_learning(
    engine: GameEngine,
    deck: DeckSpec,
    lineup: Lineup,
    difficulty: int,
    episodes: int,
    settings: Settings,
    seed: int,
    interrupt: Optional[InterruptRule] = None,
    label: str = "run",
    iteration: int = 0,
    parent: Optional[str] = None,
) -> RunRecord:
    """Train the lineup's RL slots online for up to ``episodes`` games.

    Stops early once ``interrupt.window`` episodes exist and their average
    reward exceeds ``interrupt.threshold``. The lineup is trained in place;
    a lineup without RL slots just plays.
    """
    if episodes < 1:
        raise ConfigError("episodes must be positive", {"episodes": episodes})
    if interrupt is not None and interrupt.window > episodes:
        raise ConfigError(
            "interrupt window exceeds the episode cap",
            {"window": interrupt.window, "episodes": episodes},
        )
    GameConfig.from_settings(settings, difficulty, 0)  # rejects a bad difficulty up front

    window = interrupt.window if interrupt is not None else settings.interrupt_window
    record = RunRecord(
        label=label,
        difficulty=difficulty,
        iteration=iteration,
        seed=seed,
        window=window,
        parent=parent,
    )
    tracker = TrailingMean(window)
    rng = np.random.default_rng(derive_seed(seed, "agent"))
    started = time.perf_counter()
    run_logger = logger.bind(label=label)
    run_logger.info("Learning run started", difficulty=difficulty, episodes=episodes, seed=seed)

    for episode in range(episodes):
        config = GameConfig.from_settings(settings, difficulty, derive_seed(seed, "game", episode))
        result = play_game(engine, lineup, config, deck, rng, learn=True)
        record.rewards.append(result.reward)
        trailing = tracker.push(result.reward)
        record.trailing.append(trailing)
        run_logger.debug("Episode finished", episode=episode, reward=result.reward, rounds=result.rounds)
        # reaching the cap is a budget stop even when the mean clears the threshold
        last = episode + 1 == episodes
        if not last and interrupt is not None and trailing is not None and trailing > interrupt.threshold:
            record.stop_reason = StopReason.THRESHOLD
            break

    record.wall_seconds = time.perf_counter() - started
    record.lineup = lineup
    run_logger.info(
        "Learning run finished",
        episodes=record.episodes_used,
        stop_reason=record.stop_reason.value,
        wins=record.wins,
        trailing=record.final_trailing,
    )
    return record


@dataclass
class LearningJob:
    """Picklable arguments of one run_learning call."""

    engine: GameEngine
    deck: DeckSpec
    lineup: Lineup
    difficulty: int
    episodes: int
    settings: Settings
    seed: int
    interrupt: Optional[InterruptRule] = None
    label: str = "run"
    iteration: int = 0
    parent: Optional[str] = None


def run_learning_job(job: LearningJob) -> RunRecord:
    return run_learning(
        job.engine,
        job.deck,
        job.lineup,
        job.difficulty,
        job.episodes,
        job.settings,
        job.seed,
        job.interrupt,
        job.label,
        job.iteration,
        job.parent,
    )
