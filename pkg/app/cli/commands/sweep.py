"""``sweep``: one assignment evaluated across difficulties."""

import argparse
from typing import List

from app.cli.deps import CliContext, parse_agents
from app.config import parse_int_list
from app.core.rng import derive_seed
from app.exceptions import ConfigError
from app.schemas.evaluation import SweepReport
from app.services.evaluation import EvaluationService
from app.services.session import build_lineup


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("sweep", parents=parents, help="evaluate across difficulties")
    parser.add_argument("--agents", default=None, help="planning,questing,defense slots (@bundle per RL slot)")
    parser.add_argument("--games", type=int, default=None, help="games per difficulty")
    parser.add_argument("--difficulties", default="8..20", help='"8..20" or "8,12,20"')
    parser.set_defaults(handler=sweep)


def sweep(ctx: CliContext, args: argparse.Namespace) -> int:
    spec = parse_agents(args.agents, "random,rl-direct:2,random")
    try:
        difficulties = parse_int_list(args.difficulties)
    except ValueError:
        raise ConfigError("--difficulties must be a range or a comma list", {"value": args.difficulties})
    games = args.games if args.games is not None else ctx.settings.eval_games
    lineup = build_lineup(spec, ctx.settings, derive_seed(ctx.seed, "init"))
    reports = EvaluationService(ctx.engine, ctx.deck, ctx.settings).difficulty_sweep(
        lineup, difficulties, games, ctx.seed
    )
    report = SweepReport(assignment=spec.label, master_seed=ctx.seed, reports=reports)
    ctx.write_report("sweep.json", report)
    print(report.render_table(), end="")
    return 0
