"""``evaluate``: winrate of an assignment over seeded games."""

import argparse
from typing import List

from app.cli.deps import CliContext, parse_agents
from app.services.evaluation import EvaluationService


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("evaluate", parents=parents, help="evaluate an assignment")
    parser.add_argument("--agents", default=None, help="planning,questing,defense slots (@bundle per RL slot)")
    parser.add_argument("--games", type=int, default=None, help="number of games")
    parser.set_defaults(handler=evaluate)


def evaluate(ctx: CliContext, args: argparse.Namespace) -> int:
    spec = parse_agents(args.agents, "random,random,random")
    games = args.games if args.games is not None else ctx.settings.eval_games
    report = EvaluationService(ctx.engine, ctx.deck, ctx.settings).evaluate_assignment(
        spec, ctx.difficulty, games, ctx.seed
    )
    ctx.write_report("evaluate.json", report)
    print(f"{report.assignment} difficulty {report.difficulty}: {report.wins}/{report.games} ({report.percent()})")
    return 0
