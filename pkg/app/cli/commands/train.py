"""``train``: a single learning run."""

import argparse
from typing import List

from app.cli.deps import CliContext, parse_agents
from app.repositories.report import run_log_name, write_run_log
from app.schemas.common import validated
from app.schemas.training import InterruptRule
from app.services.session import build_lineup
from app.services.training import run_learning


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("train", parents=parents, help="train the RL slots of an assignment")
    parser.add_argument("--agents", default=None, help="planning,questing,defense slots")
    parser.add_argument("--episodes", type=int, default=None, help="episode cap")
    parser.add_argument("--threshold", type=float, default=None, help="stop once the trailing average exceeds this")
    parser.add_argument("--window", type=int, default=None, help="trailing window for --threshold")
    parser.add_argument("--label", default="train", help="run label used for output file names")
    parser.set_defaults(handler=train)


def train(ctx: CliContext, args: argparse.Namespace) -> int:
    spec = parse_agents(args.agents, "random,rl-direct:2,random")
    episodes = args.episodes if args.episodes is not None else ctx.settings.step1_episodes
    interrupt = None
    if args.threshold is not None:
        interrupt = validated(
            InterruptRule,
            window=args.window if args.window is not None else ctx.settings.interrupt_window,
            threshold=args.threshold,
        )

    lineup = build_lineup(spec, ctx.settings, ctx.seed)
    record = run_learning(
        ctx.engine,
        ctx.deck,
        lineup,
        ctx.difficulty,
        episodes,
        ctx.settings,
        ctx.seed,
        interrupt=interrupt,
        label=args.label,
    )
    write_run_log(record, ctx.out / "runs" / run_log_name(record))
    ctx.save_lineup(lineup, record.label)
    summary = record.summary(ctx.settings.hpo_window)
    ctx.write_report(f"{record.label}.json", summary)
    print(
        f"{record.label}: {record.episodes_used} episodes, {record.wins} wins, "
        f"stop {record.stop_reason.value}, trailing {record.final_trailing}"
    )
    return 0
