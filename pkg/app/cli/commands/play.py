"""``play``: one seeded game with a fixed assignment, traced."""

import argparse
from typing import List

import numpy as np

from app.cli.deps import CliContext, parse_agents
from app.core.rng import derive_seed
from app.schemas.game import GameConfig
from app.services.session import build_lineup, play_game


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("play", parents=parents, help="roll one seeded game")
    parser.add_argument("--agents", default=None, help="planning,questing,defense slots")
    parser.add_argument("--trace", action="store_true", help="include encoded vectors and decisions")
    parser.set_defaults(handler=play)


def play(ctx: CliContext, args: argparse.Namespace) -> int:
    spec = parse_agents(args.agents, "random,random,random")
    lineup = build_lineup(spec, ctx.settings, derive_seed(ctx.seed, "init"))
    config = GameConfig.from_settings(ctx.settings, ctx.difficulty, ctx.seed)
    rng = np.random.default_rng(derive_seed(ctx.seed, "agent"))

    lines: List[str] = []
    result = play_game(ctx.engine, lineup, config, ctx.deck, rng, learn=False, trace=lines.append)
    if not args.trace:
        lines = [line for line in lines if not line.startswith("decide ")]
    text = "\n".join(lines) + "\n"
    print(text, end="")
    ctx.write_text("play.trace", text)
    return 0
