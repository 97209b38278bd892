"""Winrate evaluation, difficulty sweeps and the multi-agent grid."""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import Settings, get_settings
from app.core.rng import derive_seed
from app.core.stats import ci_half_width
from app.exceptions import ConfigError
from app.logging_config import StructuredLogger
from app.models.card import DeckSpec
from app.models.game import Outcome
from app.schemas.evaluation import (
    AssignmentSpec,
    EvalReport,
    GridReport,
    GridRow,
    Role,
    SlotSpec,
)
from app.schemas.game import GameConfig
from app.services.engine import GameEngine
from app.services.session import Lineup, build_lineup, play_game
from app.services.training import run_learning
from app.tasks.pool import run_jobs

logger = StructuredLogger(__name__)

# (planning, questing, defense) RL flags of the seven grid setups
GRID_ROWS: Tuple[Tuple[bool, bool, bool], ...] = (
    (True, False, False),
    (False, True, False),
    (False, False, True),
    (True, True, False),
    (True, False, True),
    (False, True, True),
    (True, True, True),
)


@dataclass
class GameBatch:
    """Picklable slice of an evaluation."""

    engine: GameEngine
    deck: DeckSpec
    lineup: Lineup
    settings: Settings
    difficulty: int
    master_seed: int
    indices: Tuple[int, ...]


def play_batch(batch: GameBatch) -> List[Tuple[Outcome, int]]:
    """(outcome, rounds) per game; each game's seeds depend only on its index."""
    results = []
    for index in batch.indices:
        config = GameConfig.from_settings(
            batch.settings, batch.difficulty, derive_seed(batch.master_seed, "game", index)
        )
        rng = np.random.default_rng(derive_seed(batch.master_seed, "agent", index))
        result = play_game(batch.engine, batch.lineup, config, batch.deck, rng, learn=False)
        results.append((result.outcome, result.rounds))
    return results


class EvaluationService:
    """Plays seeded game batches with frozen policies."""

    def __init__(self, engine: GameEngine, deck: DeckSpec, settings: Optional[Settings] = None):
        self.engine = engine
        self.deck = deck
        self.settings = settings or get_settings()

    def evaluate(
        self,
        lineup: Lineup,
        difficulty: int,
        n_games: int,
        master_seed: int,
        workers: Optional[int] = None,
    ) -> EvalReport:
        """Winrate of the lineup over ``n_games`` independent seeded games."""
        if n_games < 1:
            raise ConfigError("n_games must be positive", {"n_games": n_games})
        GameConfig.from_settings(self.settings, difficulty, 0)  # rejects a bad difficulty up front
        workers = workers if workers is not None else self.settings.workers
        frozen = lineup.frozen()

        chunks = max(1, min(workers, n_games))
        jobs = {
            chunk: GameBatch(
                engine=self.engine,
                deck=self.deck,
                lineup=frozen,
                settings=self.settings,
                difficulty=difficulty,
                master_seed=master_seed,
                indices=tuple(range(chunk, n_games, chunks)),
            )
            for chunk in range(chunks)
        }
        outcomes: List[Tuple[Outcome, int]] = []
        for chunk_results in run_jobs(play_batch, jobs, workers).values():
            outcomes.extend(chunk_results)

        wins = sum(1 for outcome, _ in outcomes if outcome is Outcome.WIN)
        losses = Counter(outcome.value for outcome, _ in outcomes if outcome is not Outcome.WIN)
        report = EvalReport(
            assignment=lineup.spec.label,
            difficulty=difficulty,
            games=n_games,
            wins=wins,
            winrate=wins / n_games,
            ci_half_width=ci_half_width(wins, n_games),
            mean_rounds=sum(rounds for _, rounds in outcomes) / n_games,
            loss_reasons=dict(sorted(losses.items())),
            master_seed=master_seed,
        )
        logger.info(
            "Evaluation finished",
            assignment=report.assignment,
            difficulty=difficulty,
            games=n_games,
            winrate=report.percent(),
        )
        return report

    def evaluate_assignment(
        self, spec: AssignmentSpec, difficulty: int, n_games: int, master_seed: int
    ) -> EvalReport:
        """Evaluate slots built from their bundles (untrained agents where none is given)."""
        for role in spec.rl_roles():
            if spec.slot(role).bundle is None:
                logger.warning("RL slot without bundle evaluates an untrained agent", role=role.value)
        lineup = build_lineup(spec, self.settings, derive_seed(master_seed, "init"))
        return self.evaluate(lineup, difficulty, n_games, master_seed)

    def difficulty_sweep(
        self, lineup: Lineup, difficulties: Sequence[int], n_games: int, master_seed: int
    ) -> List[EvalReport]:
        """One evaluation per difficulty, same game seeds at every difficulty."""
        return [self.evaluate(lineup, d, n_games, master_seed) for d in difficulties]

    def multiagent_grid(
        self,
        base: AssignmentSpec,
        difficulty: int,
        n_games: int,
        master_seed: int,
        train_episodes: int = 0,
    ) -> GridReport:
        """Evaluate the seven RL/random setups with shared seeds.

        ``base`` supplies the RL slot (kind, encoding, bundle) of each phase;
        with ``train_episodes > 0`` each setup first trains its RL slots.
        """
        for role in Role:
            if not base.slot(role).is_rl:
                raise ConfigError(
                    "grid base assignment needs an RL slot for every phase", {"role": role.value}
                )
        rows: List[GridRow] = []
        for flags in GRID_ROWS:
            slots: Dict[str, SlotSpec] = {
                role.value: base.slot(role) if rl else SlotSpec() for role, rl in zip(Role, flags)
            }
            spec = AssignmentSpec(**slots)
            lineup = build_lineup(spec, self.settings, derive_seed(master_seed, "init"))
            if train_episodes > 0:
                run_learning(
                    self.engine,
                    self.deck,
                    lineup,
                    difficulty,
                    train_episodes,
                    self.settings,
                    derive_seed(master_seed, "grid-train"),
                    label=f"grid-{spec.label}",
                )
            report = self.evaluate(lineup, difficulty, n_games, master_seed)
            rows.append(
                GridRow(
                    planning=spec.planning.label,
                    questing=spec.questing.label,
                    defense=spec.defense.label,
                    report=report,
                )
            )
        return GridReport(
            difficulty=difficulty,
            games=n_games,
            master_seed=master_seed,
            train_episodes=train_episodes,
            rows=rows,
        )
