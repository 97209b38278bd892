"""Scaled-down reproductions of the learning experiments.

Usage: python scripts/reproduce_experiments.py [--scale 0.1] [--only learning,encoding]
Each check prints one line; the exit status is the number of failed checks.
"""

import argparse
import statistics
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.config import get_settings
from app.core.rng import derive_seed
from app.core.stats import best_trailing
from app.logging_config import setup_logging
from app.repositories.card import load_card_db, load_deck_spec
from app.schemas.evaluation import AssignmentSpec, PolicyKind, SlotSpec
from app.schemas.training import Budget, InterruptRule, StrategyKind
from app.services.curriculum import CurriculumService, strategy_spec
from app.services.engine import GameEngine
from app.services.evaluation import EvaluationService
from app.services.session import build_lineup
from app.services.training import run_learning


def scaled(n: int, scale: float) -> int:
    return max(1, int(round(n * scale)))


def questing_only(encoding: int = 2) -> AssignmentSpec:
    return AssignmentSpec(questing=SlotSpec(kind=PolicyKind.RL_DIRECT, encoding=encoding))


def report(name: str, ok: bool, detail: str) -> bool:
    print(f"{'✓' if ok else '✗'} {name}: {detail}")
    return ok


def check_learning(engine, deck, settings, scale: float) -> bool:
    """Direct questing agent learns difficulty 1 quickly on most seeds."""
    episodes, window = scaled(1500, scale), scaled(500, scale)
    passed = 0
    for seed in range(10):
        lineup = build_lineup(questing_only(), settings, seed)
        record = run_learning(engine, deck, lineup, 1, episodes, settings, seed, label=f"learning_s{seed}")
        wins = [int(r > 0) for r in record.rewards]
        if best_trailing(wins, window) >= 0.90:
            passed += 1
    return report("desk-scale learning", passed >= 8, f"{passed}/10 seeds reach 90% trailing winrate")


def check_encoding(engine, deck, settings, scale: float) -> bool:
    """Encoding 2 evaluates at least as well as encodings 0 and 1 at difficulty 8."""
    episodes, games = scaled(10000, scale), scaled(1000, scale)
    evaluator = EvaluationService(engine, deck, settings)
    means = {}
    for encoding in (0, 1, 2):
        rates = []
        for seed in range(3):
            enc_settings = settings.model_copy(update={"questing_encoding": encoding})
            lineup = build_lineup(questing_only(encoding), enc_settings, seed)
            run_learning(engine, deck, lineup, 8, episodes, enc_settings, seed, label=f"encoding{encoding}_s{seed}")
            rates.append(evaluator.evaluate(lineup, 8, games, derive_seed(seed, "eval")).winrate)
        means[encoding] = statistics.mean(rates)
    ok = means[2] >= means[0] and means[2] >= means[1]
    detail = ", ".join(f"enc{e} {100 * m:.1f}%" for e, m in means.items())
    return report("encoding ranking", ok, detail)


def check_grid(engine, deck, settings, scale: float) -> bool:
    """Questing RL > planning RL > defense RL; planning+questing RL beats every single-RL row."""
    base = AssignmentSpec.parse("rl-direct,rl-direct:2,rl-direct")
    grid = EvaluationService(engine, deck, settings).multiagent_grid(
        base, 20, scaled(2000, scale), master_seed=7, train_episodes=scaled(10000, scale)
    )
    rates = [row.report.winrate for row in grid.rows]
    planning, questing, defense, planning_questing = rates[0], rates[1], rates[2], rates[3]
    ok = questing > planning > defense and planning_questing > max(planning, questing, defense)
    return report("multi-agent ordering", ok, " ".join(f"{100 * r:.1f}" for r in rates))


def check_curriculum(engine, deck, settings, scale: float) -> bool:
    """Two-step continued beats one-step on most seed groups."""
    step1 = Budget(iterations=5, episodes_per_iteration=scaled(1000, scale))
    step2 = Budget(iterations=5, episodes_per_iteration=scaled(2500, scale))
    service = CurriculumService(engine, deck, settings)
    wins = 0
    for group in range(5):
        results = {}
        for kind in (StrategyKind.ONE_STEP, StrategyKind.TWO_STEP_CONTINUED):
            spec = strategy_spec(kind, questing_only(), settings).model_copy(
                update={
                    "step1_difficulties": [6],
                    "step1_budget": step1,
                    "step2_budget": step2,
                    "eval_games": scaled(1000, scale),
                    "best_window": min(settings.hpo_window, step2.run_length),
                }
            )
            strategy = service.run(spec, derive_seed(group, "curriculum"))
            best = strategy.best
            results[kind] = best.final.winrate if best and best.final else 0.0
        if results[StrategyKind.TWO_STEP_CONTINUED] > results[StrategyKind.ONE_STEP]:
            wins += 1
    return report("curriculum superiority", wins >= 4, f"two-step continued ahead on {wins}/5 groups")


def check_interruption(engine, deck, settings, scale: float) -> bool:
    """Difficulty-1 runs with threshold 0.5 stop well before 1,000 episodes."""
    rule = InterruptRule(window=settings.interrupt_window, threshold=settings.step1_threshold)
    used = []
    for seed in range(5):
        lineup = build_lineup(questing_only(), settings, seed)
        record = run_learning(
            engine, deck, lineup, 1, settings.interrupted_step1_cap, settings, seed,
            interrupt=rule, label=f"interrupt_s{seed}",
        )
        used.append(record.episodes_used)
    median = statistics.median(used)
    return report("interruption", median < 1000, f"median {median:.0f} episodes ({used})")


CHECKS = {
    "learning": check_learning,
    "encoding": check_encoding,
    "grid": check_grid,
    "curriculum": check_curriculum,
    "interruption": check_interruption,
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scale", type=float, default=1.0, help="multiply episode and game budgets")
    parser.add_argument("--only", default=",".join(CHECKS), help="comma-separated checks to run")
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    settings = get_settings()
    if args.workers is not None:
        settings = settings.model_copy(update={"workers": args.workers})
    setup_logging("WARNING")
    engine = GameEngine(load_card_db(settings.cards_path, settings.encounter_copies_path))
    deck = load_deck_spec(settings.deck_path)

    failed = 0
    for name in args.only.split(","):
        if not CHECKS[name.strip()](engine, deck, settings, args.scale):
            failed += 1
    print(f"\n{'✅' if not failed else '❌'} {failed} check(s) failed")
    return failed


if __name__ == "__main__":
    sys.exit(main())
