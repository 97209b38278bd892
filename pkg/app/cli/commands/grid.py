"""``grid``: the seven RL/random assignments with shared seeds."""

import argparse
from typing import List

from app.cli.deps import CliContext, parse_agents
from app.services.evaluation import EvaluationService


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("grid", parents=parents, help="multi-agent assignment grid")
    parser.add_argument("--agents", default=None, help="RL slot of each phase (random slots are filled in)")
    parser.add_argument("--games", type=int, default=None, help="games per setup")
    parser.add_argument("--episodes", type=int, default=0, help="training episodes per setup before evaluation")
    parser.set_defaults(handler=grid)


def grid(ctx: CliContext, args: argparse.Namespace) -> int:
    base = parse_agents(args.agents, "rl-direct,rl-direct:2,rl-direct")
    games = args.games if args.games is not None else ctx.settings.eval_games
    report = EvaluationService(ctx.engine, ctx.deck, ctx.settings).multiagent_grid(
        base, ctx.difficulty, games, ctx.seed, train_episodes=args.episodes
    )
    ctx.write_report("grid.json", report)
    table = report.render_table()
    ctx.write_text("grid.txt", table)
    print(table, end="")
    return 0
