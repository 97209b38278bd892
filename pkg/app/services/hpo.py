"""Random search over hidden width, learning rate and questing encoding."""

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from app.config import Settings, get_settings
from app.core.rng import derive_seed
from app.exceptions import ConfigError
from app.logging_config import StructuredLogger
from app.models.card import DeckSpec
from app.schemas.evaluation import AssignmentSpec, HpoReport, HpoSpace, HpoTrial, PolicyKind, SlotSpec
from app.services.engine import GameEngine
from app.services.evaluation import EvaluationService
from app.services.session import build_lineup
from app.services.training import run_learning
from app.tasks.pool import run_jobs

logger = StructuredLogger(__name__)


@dataclass(frozen=True)
class TrialConfig:
    index: int
    seed: int
    hidden_dim: int
    learning_rate: float
    encoding: int


def sample_trials(space: HpoSpace, trials: int, seed: int) -> List[TrialConfig]:
    """Uniform neuron count, log-uniform learning rate, uniform encoding."""
    rng = np.random.default_rng(seed)
    configs = []
    for index in range(trials):
        hidden_dim = int(rng.integers(space.neurons_min, space.neurons_max + 1))
        learning_rate = float(np.exp(rng.uniform(np.log(space.lr_min), np.log(space.lr_max))))
        encoding = int(space.encodings[rng.integers(len(space.encodings))])
        configs.append(
            TrialConfig(index, derive_seed(seed, "trial", index), hidden_dim, learning_rate, encoding)
        )
    return configs


@dataclass
class TrialJob:
    engine: GameEngine
    deck: DeckSpec
    settings: Settings
    space: HpoSpace
    config: TrialConfig


def run_trial(job: TrialJob) -> HpoTrial:
    """Train a questing agent with the sampled configuration and score it."""
    config = job.config
    settings = job.settings.model_copy(
        update={
            "hidden_dim": config.hidden_dim,
            "actor_learning_rate": config.learning_rate,
            "critic_learning_rate": config.learning_rate,
            "questing_encoding": config.encoding,
        }
    )
    spec = AssignmentSpec(questing=SlotSpec(kind=PolicyKind.RL_DIRECT, encoding=config.encoding))
    lineup = build_lineup(spec, settings, config.seed)
    record = run_learning(
        job.engine,
        job.deck,
        lineup,
        job.space.difficulty,
        job.space.episodes,
        settings,
        config.seed,
        label=f"hpo_t{config.index}",
        iteration=config.index,
    )
    trial = HpoTrial(
        index=config.index,
        seed=config.seed,
        hidden_dim=config.hidden_dim,
        learning_rate=config.learning_rate,
        encoding=config.encoding,
        score=record.best_trailing(job.space.window),
        episodes=record.episodes_used,
    )
    if job.space.eval_games > 0:
        report = EvaluationService(job.engine, job.deck, settings).evaluate(
            lineup, job.space.difficulty, job.space.eval_games, derive_seed(config.seed, "eval"), workers=1
        )
        trial = trial.model_copy(update={"winrate": report.winrate, "ci_half_width": report.ci_half_width})
    logger.info(
        "HPO trial finished",
        index=config.index,
        neurons=config.hidden_dim,
        lr=f"{config.learning_rate:.2e}",
        encoding=config.encoding,
        score=round(trial.score, 4),
    )
    return trial


class HpoService:
    """Runs independent trials and ranks them by score."""

    def __init__(self, engine: GameEngine, deck: DeckSpec, settings: Optional[Settings] = None):
        self.engine = engine
        self.deck = deck
        self.settings = settings or get_settings()

    def search(self, space: HpoSpace, trials: int, seed: int) -> HpoReport:
        """Ranked trials, best score first (ties by trial index)."""
        if trials < 0:
            raise ConfigError("trials must be non-negative", {"trials": trials})
        jobs: Dict[int, TrialJob] = {
            config.index: TrialJob(self.engine, self.deck, self.settings, space, config)
            for config in sample_trials(space, trials, seed)
        }
        results = run_jobs(run_trial, jobs, self.settings.workers)
        ranked = sorted(results.values(), key=lambda t: (-t.score, t.index))
        return HpoReport(space=space, seed=seed, trials=ranked)

