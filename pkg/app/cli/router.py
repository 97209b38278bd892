"""Command router: one subparser per command module."""

import argparse

from app.cli.commands import curriculum, evaluate, grid, hpo, play, sweep, train
from app.cli.deps import add_common_arguments

COMMANDS = (play, train, curriculum, evaluate, grid, sweep, hpo)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    add_common_arguments(common)

    parser = argparse.ArgumentParser(
        prog="quest-rl",
        description="Actor-critic agents for a cooperative quest card game",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers, [common])
    return parser
