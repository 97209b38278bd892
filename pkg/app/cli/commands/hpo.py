"""``hpo``: random search over network width, learning rate and encoding."""

import argparse
from typing import List

from app.cli.deps import CliContext
from app.schemas.common import validated
from app.schemas.evaluation import HpoSpace
from app.services.hpo import HpoService


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("hpo", parents=parents, help="hyper-parameter random search")
    parser.add_argument("--trials", type=int, default=None, help="number of sampled configurations")
    parser.add_argument("--episodes", type=int, default=None, help="episodes per trial")
    parser.add_argument("--games", type=int, default=None, help="post-hoc evaluation games (0 to skip)")
    parser.set_defaults(handler=hpo)


def hpo(ctx: CliContext, args: argparse.Namespace) -> int:
    settings = ctx.settings
    episodes = args.episodes if args.episodes is not None else settings.hpo_episodes
    space = validated(
        HpoSpace,
        episodes=episodes,
        window=min(settings.hpo_window, episodes),
        difficulty=args.difficulty if args.difficulty is not None else settings.hpo_difficulty,
        eval_games=args.games if args.games is not None else settings.eval_games,
    )
    trials = args.trials if args.trials is not None else settings.hpo_trials
    report = HpoService(ctx.engine, ctx.deck, settings).search(space, trials, ctx.seed)
    ctx.write_report("hpo.json", report)
    print(report.render_table(), end="")
    return 0
