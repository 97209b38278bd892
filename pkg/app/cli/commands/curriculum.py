"""``curriculum``: one learning strategy, or all three side by side."""

import argparse
from typing import List

from app.cli.deps import CliContext, parse_agents
from app.schemas.training import StrategyKind
from app.services.curriculum import CurriculumService, recommend_midpoint, strategy_spec

COMPARE = "compare"


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("curriculum", parents=parents, help="run a learning strategy")
    parser.add_argument(
        "--strategy",
        choices=[kind.value for kind in StrategyKind] + [COMPARE],
        default=StrategyKind.TWO_STEP_CONTINUED.value,
    )
    parser.add_argument("--agents", default=None, help="planning,questing,defense slots")
    parser.add_argument("--games", type=int, default=None, help="games per evaluation")
    parser.set_defaults(handler=curriculum)


def curriculum(ctx: CliContext, args: argparse.Namespace) -> int:
    spec = parse_agents(args.agents, "random,rl-direct:2,random")
    settings = ctx.settings
    if args.games is not None:
        settings = settings.model_copy(update={"eval_games": args.games})
    service = CurriculumService(ctx.engine, ctx.deck, settings, log_dir=ctx.out)

    if args.strategy == COMPARE:
        comparison = service.compare_strategies(spec, ctx.seed)
        ctx.write_report("curriculum_compare.json", comparison)
        print(comparison.render_table(), end="")
        return 0

    report = service.run(strategy_spec(StrategyKind(args.strategy), spec, settings), ctx.seed)
    ctx.write_report(f"curriculum_{report.kind.value}.json", report)
    best = report.best
    print(f"{report.kind.value}: best {report.best_provenance or '-'}", end="")
    print(f" winrate {best.final.percent()}" if best and best.final else "", end="")
    print(f" episodes {report.total_episodes}")
    midpoint = recommend_midpoint(report)
    if midpoint is not None:
        print(f"recommended midpoint difficulty {midpoint}")
    for note in report.notes:
        print(note)
    return 0
