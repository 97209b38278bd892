"""Learning strategies: one-step, two-step continued and two-step interrupted."""

import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from app.config import Settings, get_settings
from app.core.rng import derive_seed
from app.exceptions import ConfigError
from app.logging_config import StructuredLogger
from app.models.card import DeckSpec
from app.models.run import RunRecord
from app.repositories.report import run_log_name, write_run_log
from app.schemas.common import validated
from app.schemas.evaluation import AssignmentSpec, EvalReport
from app.schemas.training import (
    Budget,
    InterruptRule,
    NetworkResult,
    StopReason,
    StrategyComparison,
    StrategyKind,
    StrategyReport,
    StrategySpec,
)
from app.services.engine import GameEngine
from app.services.evaluation import EvaluationService
from app.services.session import build_lineup
from app.services.training import LearningJob, run_learning_job
from app.tasks.pool import run_jobs

logger = StructuredLogger(__name__)


def strategy_spec(
    kind: StrategyKind,
    assignment: AssignmentSpec,
    settings: Optional[Settings] = None,
) -> StrategySpec:
    """Strategy with the budgets and thresholds of ``settings``."""
    settings = settings or get_settings()
    data = dict(
        kind=kind,
        assignment=assignment,
        step1_difficulties=settings.step1_difficulties,
        step2_difficulty=settings.step2_difficulty,
        selection_winrate=settings.selection_winrate,
        eval_games=settings.eval_games,
        best_window=settings.hpo_window,
    )
    if kind is StrategyKind.TWO_STEP_INTERRUPTED:
        data.update(
            step1_budget=Budget(
                iterations=1,
                episodes_per_iteration=min(settings.step1_episodes, settings.interrupted_step1_cap),
                episode_cap=settings.interrupted_step1_cap,
            ),
            step2_budget=Budget(
                iterations=1,
                episodes_per_iteration=min(settings.step2_episodes, settings.interrupted_step2_cap),
                episode_cap=settings.interrupted_step2_cap,
            ),
            step1_interrupt=InterruptRule(window=settings.interrupt_window, threshold=settings.step1_threshold),
            step2_interrupt=InterruptRule(window=settings.interrupt_window, threshold=settings.step2_threshold),
        )
    else:
        data.update(
            step1_budget=Budget(iterations=settings.step1_iterations, episodes_per_iteration=settings.step1_episodes),
            step2_budget=Budget(iterations=settings.step2_iterations, episodes_per_iteration=settings.step2_episodes),
        )
    return validated(StrategySpec, **data)


def recommend_midpoint(report: StrategyReport) -> Optional[int]:
    """Step-1 difficulty of the best final network, if any."""
    return report.best.step1_difficulty if report.best is not None else None


def _best(results: List[NetworkResult]) -> Optional[NetworkResult]:
    evaluated = [r for r in results if r.final is not None]
    if not evaluated:
        return None
    return max(evaluated, key=lambda r: r.final.winrate)


class CurriculumService:
    """Runs learning strategies and evaluates the resulting networks."""

    def __init__(
        self,
        engine: GameEngine,
        deck: DeckSpec,
        settings: Optional[Settings] = None,
        log_dir: Optional[Path] = None,
    ):
        self.engine = engine
        self.deck = deck
        self.settings = settings or get_settings()
        self.log_dir = log_dir
        self.evaluator = EvaluationService(engine, deck, self.settings)

    # ===== BUILDING BLOCKS =====

    def _log(self, record: RunRecord) -> None:
        if self.log_dir is not None:
            write_run_log(record, self.log_dir / "runs" / run_log_name(record))

    def _train(self, jobs: Dict[Tuple, LearningJob]) -> Dict[Tuple, RunRecord]:
        records = run_jobs(run_learning_job, jobs, self.settings.workers)
        for record in records.values():
            self._log(record)
        return records

    def _evaluate(self, record: RunRecord, difficulty: int, spec: StrategySpec, master_seed: int, tag: str) -> EvalReport:
        return self.evaluator.evaluate(
            record.lineup, difficulty, spec.eval_games, derive_seed(master_seed, tag), workers=1
        )

    def step1(self, spec: StrategySpec, master_seed: int) -> Dict[Tuple[int, int], RunRecord]:
        """Fresh-weight runs at every step-1 difficulty, keyed (difficulty, iteration)."""
        jobs = {}
        for difficulty in spec.step1_difficulties:
            for iteration in range(spec.step1_budget.iterations):
                seed = derive_seed(master_seed, "step1", difficulty, iteration)
                jobs[(difficulty, iteration)] = LearningJob(
                    engine=self.engine,
                    deck=self.deck,
                    lineup=build_lineup(spec.assignment, self.settings, seed),
                    difficulty=difficulty,
                    episodes=spec.step1_budget.run_length,
                    settings=self.settings,
                    seed=seed,
                    interrupt=spec.step1_interrupt,
                    label=f"step1_d{difficulty}_i{iteration}",
                    iteration=iteration,
                )
        return self._train(jobs)

    # ===== STRATEGIES =====

    def one_step(self, spec: StrategySpec, master_seed: int) -> StrategyReport:
        """Train at each low difficulty, test every network at the full difficulty."""
        started = time.perf_counter()
        records = self.step1(spec, master_seed)
        results: List[NetworkResult] = []
        per_difficulty: Dict[int, List[float]] = {}
        for (difficulty, _), record in records.items():
            final = self._evaluate(record, spec.step2_difficulty, spec, master_seed, "final")
            results.append(
                NetworkResult(
                    provenance=f"0→{difficulty}",
                    step1_difficulty=difficulty,
                    run=record.summary(spec.best_window),
                    final=final,
                )
            )
            per_difficulty.setdefault(difficulty, []).append(final.winrate)

        report = StrategyReport(
            kind=spec.kind,
            assignment=spec.assignment.label,
            master_seed=master_seed,
            step1=results,
            per_difficulty_winrate={d: sum(v) / len(v) for d, v in sorted(per_difficulty.items())},
            best=_best(results),
            total_episodes=sum(r.episodes_used for r in records.values()),
            wall_seconds=time.perf_counter() - started,
        )
        self._log_report(report)
        return report

    def two_step_continued(self, spec: StrategySpec, master_seed: int) -> StrategyReport:
        """Step 1, keep networks above the selection winrate, continue them at the full difficulty."""
        started = time.perf_counter()
        records = self.step1(spec, master_seed)
        step1_results: List[NetworkResult] = []
        per_difficulty: Dict[int, List[float]] = {}
        survivors: Dict[Tuple[int, int], RunRecord] = {}
        for (difficulty, iteration), record in records.items():
            selection = self._evaluate(record, difficulty, spec, master_seed, "select")
            selected = selection.winrate > spec.selection_winrate
            step1_results.append(
                NetworkResult(
                    provenance=f"0→{difficulty}",
                    step1_difficulty=difficulty,
                    run=record.summary(spec.best_window),
                    selection=selection,
                    selected=selected,
                )
            )
            per_difficulty.setdefault(difficulty, []).append(selection.winrate)
            if selected:
                survivors[(difficulty, iteration)] = record
        logger.info("Step-1 selection", survivors=len(survivors), networks=len(records))

        notes: List[str] = []
        step2_results: List[NetworkResult] = []
        total = sum(r.episodes_used for r in records.values())
        if not survivors:
            notes.append(f"no step-1 network exceeded winrate {spec.selection_winrate}; step 2 skipped")

        jobs = {}
        for (difficulty, parent_iteration), parent in survivors.items():
            provenance = f"0→{difficulty}→{spec.step2_difficulty}"
            for iteration in range(spec.step2_budget.iterations):
                seed = derive_seed(master_seed, "step2", difficulty, parent_iteration, iteration)
                jobs[(difficulty, parent_iteration, iteration)] = LearningJob(
                    engine=self.engine,
                    deck=self.deck,
                    lineup=parent.lineup.copy(),
                    difficulty=spec.step2_difficulty,
                    episodes=spec.step2_budget.run_length,
                    settings=self.settings,
                    seed=seed,
                    interrupt=spec.step2_interrupt,
                    label=f"step2_d{difficulty}_p{parent_iteration}_i{iteration}",
                    iteration=iteration,
                    parent=provenance,
                )
        step2_records = self._train(jobs) if jobs else {}
        total += sum(r.episodes_used for r in step2_records.values())

        for (difficulty, parent_iteration) in survivors:
            runs = [
                (key, record)
                for key, record in step2_records.items()
                if key[:2] == (difficulty, parent_iteration)
            ]
            best_key, best_record = max(
                runs, key=lambda item: item[1].best_trailing(spec.best_window)
            )
            for key, record in runs:
                is_best = key == best_key
                final = (
                    self._evaluate(record, spec.step2_difficulty, spec, master_seed, "final")
                    if is_best
                    else None
                )
                step2_results.append(
                    NetworkResult(
                        provenance=record.parent,
                        step1_difficulty=difficulty,
                        run=record.summary(spec.best_window),
                        final=final,
                        selected=is_best,
                    )
                )

        report = StrategyReport(
            kind=spec.kind,
            assignment=spec.assignment.label,
            master_seed=master_seed,
            step1=step1_results,
            step2=step2_results,
            per_difficulty_winrate={d: sum(v) / len(v) for d, v in sorted(per_difficulty.items())},
            best=_best(step2_results),
            total_episodes=total,
            wall_seconds=time.perf_counter() - started,
            notes=notes,
        )
        self._log_report(report)
        return report

    def two_step_interrupted(self, spec: StrategySpec, master_seed: int) -> StrategyReport:
        """Step 1 until the reward threshold, then one capped continuous run per survivor."""
        if spec.step1_interrupt is None or spec.step2_interrupt is None:
            raise ConfigError("interrupted strategy needs both interrupt rules")
        started = time.perf_counter()
        records = self.step1(spec, master_seed)
        step1_results: List[NetworkResult] = []
        survivors: Dict[Tuple[int, int], RunRecord] = {}
        for (difficulty, iteration), record in records.items():
            selected = record.stop_reason is StopReason.THRESHOLD
            step1_results.append(
                NetworkResult(
                    provenance=f"0→{difficulty}",
                    step1_difficulty=difficulty,
                    run=record.summary(spec.best_window),
                    selected=selected,
                )
            )
            if selected:
                survivors[(difficulty, iteration)] = record
        logger.info("Step-1 interruption", survivors=len(survivors), networks=len(records))

        notes: List[str] = []
        if not survivors:
            notes.append("no step-1 run reached its reward threshold; step 2 skipped")
        jobs = {}
        for (difficulty, parent_iteration), parent in survivors.items():
            jobs[(difficulty, parent_iteration)] = LearningJob(
                engine=self.engine,
                deck=self.deck,
                lineup=parent.lineup.copy(),
                difficulty=spec.step2_difficulty,
                episodes=spec.step2_budget.run_length,
                settings=self.settings,
                seed=derive_seed(master_seed, "step2", difficulty, parent_iteration),
                interrupt=spec.step2_interrupt,
                label=f"step2_d{difficulty}_p{parent_iteration}",
                parent=f"0→{difficulty}→{spec.step2_difficulty}",
            )
        step2_records = self._train(jobs) if jobs else {}

        step2_results: List[NetworkResult] = []
        per_difficulty: Dict[int, List[float]] = {}
        for (difficulty, _), record in step2_records.items():
            final = self._evaluate(record, spec.step2_difficulty, spec, master_seed, "final")
            accounted = math.ceil(record.episodes_used / spec.step2_budget.episodes_per_iteration)
            notes.append(
                f"{record.parent}: {record.episodes_used} step-2 episodes "
                f"({accounted} iterations of {spec.step2_budget.episodes_per_iteration}), "
                f"stop {record.stop_reason.value}"
            )
            step2_results.append(
                NetworkResult(
                    provenance=record.parent,
                    step1_difficulty=difficulty,
                    run=record.summary(spec.best_window),
                    final=final,
                    selected=True,
                )
            )
            per_difficulty.setdefault(difficulty, []).append(final.winrate)

        report = StrategyReport(
            kind=spec.kind,
            assignment=spec.assignment.label,
            master_seed=master_seed,
            step1=step1_results,
            step2=step2_results,
            per_difficulty_winrate={d: sum(v) / len(v) for d, v in sorted(per_difficulty.items())},
            best=_best(step2_results),
            total_episodes=sum(r.episodes_used for r in records.values())
            + sum(r.episodes_used for r in step2_records.values()),
            wall_seconds=time.perf_counter() - started,
            notes=notes,
        )
        self._log_report(report)
        return report

    def run(self, spec: StrategySpec, master_seed: int) -> StrategyReport:
        strategies = {
            StrategyKind.ONE_STEP: self.one_step,
            StrategyKind.TWO_STEP_CONTINUED: self.two_step_continued,
            StrategyKind.TWO_STEP_INTERRUPTED: self.two_step_interrupted,
        }
        return strategies[spec.kind](spec, master_seed)

    def compare_strategies(self, assignment: AssignmentSpec, master_seed: int) -> StrategyComparison:
        """All three strategies for one assignment, same master seed."""
        reports = [
            self.run(strategy_spec(kind, assignment, self.settings), master_seed)
            for kind in StrategyKind
        ]
        return StrategyComparison(assignment=assignment.label, master_seed=master_seed, reports=reports)

    def _log_report(self, report: StrategyReport) -> None:
        logger.info(
            "Strategy finished",
            kind=report.kind.value,
            best=report.best_provenance,
            winrate=report.best.final.percent() if report.best and report.best.final else None,
            episodes=report.total_episodes,
        )
